//! Convolution algebras of finite groupoids with counting measure.
//!
//! The basis of `A(G)` is `{δ_g : g ∈ G1}` with `δ_g ∗ δ_h = δ_{gh}` when
//! `r(g) = l(h)` and `0` otherwise.

mod bimodule;
mod hopfish;
mod sparse;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::groupoid::{ArrowId, FiniteGroupoid};
use crate::linalg::Matrix;
use crate::scalars::{rat, Angle, Scalar};

pub use bimodule::{bimodule_iso, hom_space, Bimodule, IsoOutcome};
pub use hopfish::{
    character_module, check_coassoc, check_counit, cyclic_character, module_tensor, point_module, HopfishCheck,
    HopfishData,
};
pub use sparse::SparseMatrix;

/// A finitely supported function on the arrows of a groupoid.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    pub groupoid: Arc<FiniteGroupoid>,
    coeffs: BTreeMap<ArrowId, Scalar>,
}

impl AlgebraElement {
    pub fn zero(g: &Arc<FiniteGroupoid>) -> Self {
        AlgebraElement { groupoid: g.clone(), coeffs: BTreeMap::new() }
    }

    pub fn delta(g: &Arc<FiniteGroupoid>, a: ArrowId) -> Self {
        AlgebraElement::from_coeffs(g, [(a, Scalar::one())])
    }

    /// `Σ_x δ_{1_x}`, the unit of `A(G)`.
    pub fn unit(g: &Arc<FiniteGroupoid>) -> Self {
        AlgebraElement::from_coeffs(g, (0..g.n_objects()).map(|x| (g.unit(x), Scalar::one())))
    }

    pub fn from_coeffs<I: IntoIterator<Item = (ArrowId, Scalar)>>(g: &Arc<FiniteGroupoid>, coeffs: I) -> Self {
        let mut out = AlgebraElement::zero(g);
        for (a, c) in coeffs {
            assert!(a < g.n_arrows(), "arrow {a} outside the groupoid");
            out.add_at(a, &c);
        }
        out
    }

    fn add_at(&mut self, a: ArrowId, c: &Scalar) {
        let v = self.coeffs.get(&a).map(|x| x + c).unwrap_or_else(|| c.clone());
        if v.is_zero() {
            self.coeffs.remove(&a);
        } else {
            self.coeffs.insert(a, v);
        }
    }

    pub fn coeff(&self, a: ArrowId) -> Scalar {
        self.coeffs.get(&a).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (ArrowId, &Scalar)> {
        self.coeffs.iter().map(|(a, c)| (*a, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_algebra(&self, other: &AlgebraElement) -> Result<()> {
        if self.groupoid != other.groupoid {
            return Err(Error::AlgebraMismatch("elements live on different groupoids".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.same_algebra(other)?;
        let mut out = self.clone();
        for (a, c) in &other.coeffs {
            out.add_at(*a, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        AlgebraElement::from_coeffs(&self.groupoid, self.coeffs.iter().map(|(a, x)| (*a, c * x)))
    }

    /// `(a ∗ b)(g) = Σ_{h : l(h) = l(g)} a(h) b(h⁻¹g)`.
    pub fn convolve(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.same_algebra(other)?;
        let g = &*self.groupoid;
        let mut out = AlgebraElement::zero(&self.groupoid);
        for target in 0..g.n_arrows() {
            let mut sum = Scalar::zero();
            for &h in g.arrows_from(g.l(target)) {
                let Some(ah) = self.coeffs.get(&h) else { continue };
                let rest = g.comp(g.inv(h), target).expect("r(h⁻¹) = l(h) = l(g)");
                if let Some(b) = other.coeffs.get(&rest) {
                    sum = &sum + &(ah * b);
                }
            }
            out.add_at(target, &sum);
        }
        Ok(out)
    }

    /// `a*(g) = conj(a(g⁻¹))`.
    pub fn star(&self) -> AlgebraElement {
        let g = &*self.groupoid;
        AlgebraElement::from_coeffs(&self.groupoid, self.coeffs.iter().map(|(a, c)| (g.inv(*a), c.conj())))
    }

    /// Coefficients as a dense column over the arrow basis.
    pub fn to_vec(&self) -> Vec<Scalar> {
        (0..self.groupoid.n_arrows()).map(|a| self.coeff(a)).collect()
    }
}

/// A random scalar: small Gaussian integer times an optional `e^{ikλ}` or
/// root-of-unity phase.
pub fn random_scalar<R: Rng>(rng: &mut R) -> Scalar {
    let re = rng.gen_range(-3i64..=3);
    let im = rng.gen_range(-2i64..=2);
    let base = Scalar::gaussian(rat(re, 1), rat(im, 1));
    let phase = match rng.gen_range(0..3) {
        0 => Angle::zero(),
        1 => Angle::lambda(rat(rng.gen_range(-2i64..=2), 1)),
        _ => Angle::two_pi(rat(rng.gen_range(0i64..6), 6)),
    };
    &base * &Scalar::phase(&phase)
}

pub fn random_element<R: Rng>(rng: &mut R, g: &Arc<FiniteGroupoid>) -> AlgebraElement {
    let n = g.n_arrows();
    let k = rng.gen_range(0..=n.min(4));
    let coeffs: Vec<(ArrowId, Scalar)> = (0..k).map(|_| (rng.gen_range(0..n), random_scalar(rng))).collect();
    AlgebraElement::from_coeffs(g, coeffs)
}

/// All nonzero products `δ_g ∗ δ_h = δ_k` as triples `(g, h, k)`.
pub fn structure_constants(g: &FiniteGroupoid) -> Vec<(ArrowId, ArrowId, ArrowId)> {
    let mut v: Vec<_> = g.comp_table().iter().map(|(&(a, b), &c)| (a, b, c)).collect();
    v.sort_unstable();
    v
}

pub fn is_commutative(g: &FiniteGroupoid) -> bool {
    g.comp_table().iter().all(|(&(a, b), &c)| g.comp(b, a) == Some(c))
}

/// Checks that the linear map with columns `matrix` (images of `δ_g` in the
/// arrow basis of `h`) is a unital algebra isomorphism `A(g) → A(h)`.
pub fn check_algebra_iso(g: &Arc<FiniteGroupoid>, h: &Arc<FiniteGroupoid>, matrix: &Matrix<Scalar>) -> Result<bool> {
    if matrix.nrows != h.n_arrows() || matrix.ncols != g.n_arrows() || !matrix.is_invertible()? {
        return Ok(false);
    }
    let image = |a: ArrowId| {
        AlgebraElement::from_coeffs(h, (0..matrix.nrows).map(|k| (k, matrix.get(k, a).clone())))
    };
    let apply = |x: &AlgebraElement| {
        let mut out = AlgebraElement::zero(h);
        for (a, c) in x.support() {
            out = out.add(&image(a).scale(c)).expect("same algebra");
        }
        out
    };
    if apply(&AlgebraElement::unit(g)) != AlgebraElement::unit(h) {
        return Ok(false);
    }
    for a in 0..g.n_arrows() {
        for b in 0..g.n_arrows() {
            let lhs = apply(&AlgebraElement::delta(g, a).convolve(&AlgebraElement::delta(g, b))?);
            let rhs = image(a).convolve(&image(b))?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Fourier transform `A(BZn) → A(trivial groupoid on n points)`,
/// `δ_k ↦ Σ_a ζ_n^{ak} 1_a`. Its inverse sends `1_a` to the idempotent
/// `(1/n) Σ_k ζ_n^{-ak} δ_k`.
pub fn fourier_matrix(n: usize) -> Matrix<Scalar> {
    let mut m = Matrix::zeros(n, n);
    for a in 0..n {
        for k in 0..n {
            m.set(a, k, Scalar::phase(&Angle::two_pi(rat(((a * k) % n) as i64, n as i64))));
        }
    }
    m
}

/// The idempotents `e_a = (1/n) Σ_k ζ_n^{-ak} δ_k` of `A(BZn)`.
pub fn character_idempotents(g: &Arc<FiniteGroupoid>, n: usize) -> Vec<AlgebraElement> {
    (0..n)
        .map(|a| {
            AlgebraElement::from_coeffs(
                g,
                (0..n).map(|k| {
                    let phase = Scalar::phase(&Angle::two_pi(rat(((n - (a * k) % n) % n) as i64, n as i64)));
                    (k, &phase * &Scalar::rational(rat(1, n as i64)))
                }),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::groupoid::random::random_groupoid;
    use crate::groupoid::GroupSpec;

    fn arc(g: FiniteGroupoid) -> Arc<FiniteGroupoid> {
        Arc::new(g)
    }

    #[test]
    fn delta_products() {
        let g = arc(FiniteGroupoid::pair_groupoid(&["1".into(), "2".into()]));
        for a in 0..4 {
            for b in 0..4 {
                let p = AlgebraElement::delta(&g, a).convolve(&AlgebraElement::delta(&g, b)).unwrap();
                match g.comp(a, b) {
                    Some(c) => assert_eq!(p, AlgebraElement::delta(&g, c)),
                    None => assert!(p.is_zero()),
                }
            }
        }
    }

    #[test]
    fn z2_group_algebra() {
        let g = arc(FiniteGroupoid::group_as_groupoid(&GroupSpec::cyclic(2)));
        let d1 = AlgebraElement::delta(&g, 1);
        assert_eq!(d1.convolve(&d1).unwrap(), AlgebraElement::delta(&g, 0));
    }

    #[test]
    fn trivial_groupoid_is_pointwise() {
        let g = arc(FiniteGroupoid::trivial_groupoid(&["x".into(), "y".into(), "z".into()]));
        let a = AlgebraElement::from_coeffs(&g, [(0, Scalar::from_int(2)), (1, Scalar::from_int(3))]);
        let b = AlgebraElement::from_coeffs(&g, [(1, Scalar::from_int(5)), (2, Scalar::from_int(7))]);
        assert_eq!(a.convolve(&b).unwrap(), AlgebraElement::from_coeffs(&g, [(1, Scalar::from_int(15))]));
    }

    #[test]
    fn star_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let g = arc(random_groupoid(&mut rng, 8));
            let a = random_element(&mut rng, &g);
            let b = random_element(&mut rng, &g);
            assert_eq!(a.star().star(), a);
            assert_eq!(a.convolve(&b).unwrap().star(), b.star().convolve(&a.star()).unwrap());
            for x in 0..g.n_arrows() {
                assert_eq!(AlgebraElement::delta(&g, x).star(), AlgebraElement::delta(&g, g.inv(x)));
            }
        }
    }

    #[test]
    fn mismatched_algebras() {
        let g = arc(FiniteGroupoid::terminal());
        let h = arc(FiniteGroupoid::group_as_groupoid(&GroupSpec::cyclic(2)));
        assert!(matches!(
            AlgebraElement::unit(&g).convolve(&AlgebraElement::unit(&h)),
            Err(Error::AlgebraMismatch(_))
        ));
    }

    #[test]
    fn fourier_is_algebra_iso() {
        for n in 2..=4 {
            let bz = arc(FiniteGroupoid::group_as_groupoid(&GroupSpec::cyclic(n)));
            let pts = arc(FiniteGroupoid::trivial_groupoid(GroupSpec::cyclic(n).labels()));
            assert!(check_algebra_iso(&bz, &pts, &fourier_matrix(n)).unwrap());
            let idem = character_idempotents(&bz, n);
            for (a, e) in idem.iter().enumerate() {
                assert_eq!(e.convolve(e).unwrap(), *e);
                for (b, f) in idem.iter().enumerate() {
                    if a != b {
                        assert!(e.convolve(f).unwrap().is_zero());
                    }
                }
            }
        }
        let bz2 = arc(FiniteGroupoid::group_as_groupoid(&GroupSpec::cyclic(2)));
        let pts = arc(FiniteGroupoid::trivial_groupoid(&["p".into(), "q".into()]));
        assert!(!check_algebra_iso(&bz2, &pts, &Matrix::identity(2)).unwrap());
    }
}
