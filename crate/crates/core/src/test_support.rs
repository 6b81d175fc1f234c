use num_complex::Complex64;

use crate::linalg::ComplexMatrix;

/// Small self-contained generator so kernel tests do not depend on `genlab`.
pub(crate) struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn sym(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (2.0 / (1u64 << 53) as f64) - 1.0
    }
}

pub(crate) fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
    let mut g = SplitMix(seed);
    ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(g.sym(), g.sym()))
}
