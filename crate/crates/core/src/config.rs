/// Float tolerance policy.
///
/// `abs` bounds residuals of identities that must hold exactly in the exact
/// backends; `rel` scales the "is this tensor zero" verdict threshold by the
/// largest input coefficient. Exact backends ignore both and use literal
/// equality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-10,
            rel: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    /// Same threshold for residuals and verdicts.
    pub fn uniform(tol: f64) -> Self {
        Tolerance { abs: tol, rel: tol }
    }

    /// Verdict threshold for a tensor whose inputs have magnitude `scale`.
    pub fn verdict_threshold(&self, scale: f64) -> f64 {
        self.rel * scale
    }
}
