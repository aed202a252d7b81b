use crate::sring::SRing;

/// An edge colouring of `V x V`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorMatrix {
    n: usize,
    colors: Vec<u32>,
    num_colors: usize,
}

impl ColorMatrix {
    pub fn new(n: usize, colors: Vec<u32>) -> Self {
        assert_eq!(colors.len(), n * n);
        let num_colors = colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        ColorMatrix {
            n,
            colors,
            num_colors,
        }
    }

    /// The Cayley scheme of `A`: `(g, h)` gets the class of `h g^-1`.
    pub fn from_sring(a: &SRing) -> Self {
        let g = a.group();
        let n = g.order();
        let mut colors = vec![0u32; n * n];
        for x in 0..n {
            let xi = g.inv(x);
            for y in 0..n {
                colors[x * n + y] = a.class_of(g.mul(y, xi)) as u32;
            }
        }
        ColorMatrix {
            n,
            colors,
            num_colors: a.rank(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.colors[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[u32] {
        &self.colors[x * self.n..(x + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.colors
    }

    /// Renames every colour `c` to `map[c]`.
    pub fn relabel(&self, map: &[usize]) -> Self {
        ColorMatrix {
            n: self.n,
            colors: self
                .colors
                .iter()
                .map(|&c| map[c as usize] as u32)
                .collect(),
            num_colors: self.num_colors,
        }
    }

    /// Out-degree of colour `c` in row `x`.
    pub fn out_degree(&self, x: usize, c: u32) -> usize {
        self.row(x).iter().filter(|&&k| k == c).count()
    }
}

/// The colour matrix of the Cayley scheme of `A`.
pub fn color_matrix(a: &SRing) -> ColorMatrix {
    ColorMatrix::from_sring(a)
}
