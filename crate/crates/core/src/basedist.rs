//! Pluggable base (quasi-)distances on the single-object space.
//!
//! A base distance must satisfy identity (`d(x, y) = 0` iff `x = y`) and the
//! triangle inequality; symmetry is optional and declared by the provider via
//! [`BaseDistance::is_symmetric`]. The shipped distances are fuzz-tested for
//! these properties rather than assumed.

use crate::error::{Error, Result};
use crate::types::ObjectState;

/// Evaluation contract for a base distance. Implementations must be
/// reentrant and side-effect free so evaluations can run concurrently.
pub trait BaseDistance {
    /// Distance from `x` to `y` (order matters for asymmetric distances).
    fn eval(&self, x: &ObjectState, y: &ObjectState) -> Result<f64>;

    /// Whether the provider guarantees `eval(x, y) == eval(y, x)`.
    fn is_symmetric(&self) -> bool;
}

/// The Euclidean distance; a symmetric metric for any dimension.
#[derive(Debug, Clone, Copy, Default)]
pub struct Euclidean;

impl BaseDistance for Euclidean {
    fn eval(&self, x: &ObjectState, y: &ObjectState) -> Result<f64> {
        euclidean(x, y)
    }

    fn is_symmetric(&self) -> bool {
        true
    }
}

/// `||x - y||_2` for states of equal dimension.
pub fn euclidean(x: &ObjectState, y: &ObjectState) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let sum: f64 = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum();
    Ok(sum.sqrt())
}

/// A genuinely asymmetric quasi-metric on 1-D states: moving up costs the
/// plain gap, moving down costs `kappa` times the gap.
///
/// Satisfies identity and the triangle inequality but not symmetry, which
/// makes it useful for exercising quasi-metric claims.
#[derive(Debug, Clone, Copy)]
pub struct AsymScale {
    kappa: f64,
}

impl AsymScale {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 1.0) {
            return Err(Error::parameter(
                "kappa",
                format!("must be finite and > 1, got {kappa}"),
            ));
        }
        Ok(AsymScale { kappa })
    }
}

impl BaseDistance for AsymScale {
    fn eval(&self, x: &ObjectState, y: &ObjectState) -> Result<f64> {
        asym_scale(x, y, self.kappa)
    }

    fn is_symmetric(&self) -> bool {
        false
    }
}

/// `(y - x)` if `y >= x`, else `kappa * (x - y)`, on 1-D states.
pub fn asym_scale(x: &ObjectState, y: &ObjectState, kappa: f64) -> Result<f64> {
    if !(kappa.is_finite() && kappa > 1.0) {
        return Err(Error::parameter(
            "kappa",
            format!("must be finite and > 1, got {kappa}"),
        ));
    }
    if x.dim() != 1 || y.dim() != 1 {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let (a, b) = (x.coords()[0], y.coords()[0]);
    Ok(if b >= a { b - a } else { kappa * (a - b) })
}

/// The cut-off wrapper: `min(d(x, y), c)`. Preserves identity and the
/// triangle inequality of the wrapped distance.
#[derive(Debug, Clone)]
pub struct Cutoff<D: BaseDistance> {
    inner: D,
    c: f64,
}

impl<D: BaseDistance> Cutoff<D> {
    pub fn cap(&self) -> f64 {
        self.c
    }
}

/// Wraps `inner` with the cut-off at `c > 0`.
pub fn cutoff<D: BaseDistance>(inner: D, c: f64) -> Result<Cutoff<D>> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::parameter(
            "c",
            format!("must be finite and > 0, got {c}"),
        ));
    }
    Ok(Cutoff { inner, c })
}

impl<D: BaseDistance> BaseDistance for Cutoff<D> {
    fn eval(&self, x: &ObjectState, y: &ObjectState) -> Result<f64> {
        Ok(self.inner.eval(x, y)?.min(self.c))
    }

    fn is_symmetric(&self) -> bool {
        self.inner.is_symmetric()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn s(v: &[f64]) -> ObjectState {
        ObjectState::new(v.to_vec()).unwrap()
    }

    #[test]
    fn euclidean_basics() {
        assert_eq!(euclidean(&s(&[0.0, 0.0]), &s(&[0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(euclidean(&s(&[0.0, 0.0]), &s(&[3.0, 4.0])).unwrap(), 5.0);
        assert!(euclidean(&s(&[0.0]), &s(&[0.0, 1.0])).is_err());
    }

    #[test]
    fn euclidean_matches_componentwise_recomputation() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..200 {
            let dim = rng.gen_range(1..=5);
            let a: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let b: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let expect = a
                .iter()
                .zip(&b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt();
            let got = euclidean(&s(&a), &s(&b)).unwrap();
            assert!((got - expect).abs() <= 1e-12);
        }
    }

    #[test]
    fn asym_scale_piecewise_definition() {
        assert_eq!(asym_scale(&s(&[1.0]), &s(&[1.0]), 2.0).unwrap(), 0.0);
        assert_eq!(asym_scale(&s(&[0.0]), &s(&[3.0]), 2.0).unwrap(), 3.0);
        assert_eq!(asym_scale(&s(&[3.0]), &s(&[0.0]), 2.0).unwrap(), 6.0);
        assert!(asym_scale(&s(&[0.0]), &s(&[1.0]), 1.0).is_err());
        assert!(AsymScale::new(0.5).is_err());
    }

    #[test]
    fn cutoff_caps_and_passes_through() {
        let d = cutoff(Euclidean, 10.0).unwrap();
        assert_eq!(d.eval(&s(&[0.0]), &s(&[5.0])).unwrap(), 5.0);
        assert_eq!(d.eval(&s(&[0.0]), &s(&[15.0])).unwrap(), 10.0);
        assert!(cutoff(Euclidean, 0.0).is_err());
    }

    // 1e4 random triples per distance: identity at x == y and the triangle
    // inequality with slack 1e-9.
    #[test]
    fn triangle_fuzz_on_shipped_distances() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let asym = AsymScale::new(2.5).unwrap();
        let capped = cutoff(AsymScale::new(2.5).unwrap(), 1.5).unwrap();
        let eucl = Euclidean;
        for _ in 0..10_000 {
            let x = s(&[rng.gen_range(-5.0..5.0)]);
            let y = s(&[rng.gen_range(-5.0..5.0)]);
            let z = s(&[rng.gen_range(-5.0..5.0)]);
            for d in [&asym as &dyn BaseDistance, &capped, &eucl] {
                let xy = d.eval(&x, &y).unwrap();
                let xz = d.eval(&x, &z).unwrap();
                let zy = d.eval(&z, &y).unwrap();
                assert!(xy <= xz + zy + 1e-9);
                assert!(xy >= 0.0);
                assert_eq!(d.eval(&x, &x).unwrap(), 0.0);
            }
        }
    }
}
