//! Random valid instances for every case of the formulary, used by property
//! checks and the acceptance suite.

use crate::arith::q;
use crate::error::Result;
use crate::etale::{EtaleElement, QuadraticEtale};
use crate::factor::character::{LocalE, TameCharacter};
use crate::factor::eta_from_nu;
use crate::localfield::{self, make_extension, BaseField, ExtensionTower, FieldElement, SquareClass};
use crate::params::{
    validate_instance, CocycleClass, EndoscopicDatum, FactorKind, FormulaCase, GroupCase, GroupDescriptor,
    IndexParam, Instance, RegularParam, Scalar, Side,
};
use rand::seq::SliceRandom;
use rand::Rng;
use std::sync::Arc;

const MAX_ATTEMPTS: usize = 10_000;

/// Shape constraints for a sampled instance.
#[derive(Clone, Debug)]
pub struct Shape {
    pub p: u64,
    /// Number of indices on each side.
    pub minus: usize,
    pub plus: usize,
    /// Probability that an F_{±i} is a quadratic extension of F.
    pub ext_prob: f64,
    /// Probability that an F_i is split (orthogonal, symplectic and twisted cases).
    pub split_prob: f64,
}

impl Shape {
    pub fn new(p: u64, minus: usize, plus: usize) -> Self {
        Shape {
            p,
            minus,
            plus,
            ext_prob: 0.2,
            split_prob: 0.25,
        }
    }
}

/// Sampling context over one base field: Q_p with its quadratic extensions.
pub struct Sampler {
    pub ground: Arc<ExtensionTower>,
    exts: Vec<Arc<ExtensionTower>>,
}

impl Sampler {
    pub fn new(p: u64) -> Result<Self> {
        let base = BaseField::padic(p)?;
        let ground = base.trivial_tower();
        let pi = p as i64;
        let exts = vec![
            make_extension(base, 2, &[-pi, 1])?,
            make_extension(base, 1, &[-pi, 0, 1])?,
        ];
        Ok(Sampler { ground, exts })
    }

    fn small<R: Rng>(&self, rng: &mut R) -> i64 {
        rng.gen_range(-4..=4)
    }

    /// A random nonzero element, occasionally with nonzero valuation.
    pub fn element<R: Rng>(&self, rng: &mut R, t: &Arc<ExtensionTower>) -> FieldElement {
        loop {
            let coords = (0..t.n()).map(|_| q(self.small(rng))).collect();
            let x = t.elem(coords);
            if x.is_zero() {
                continue;
            }
            let p = q(t.p().unwrap() as i64);
            return match rng.gen_range(0..6) {
                0 => x.scale(&p),
                1 => x.scale(&(q(1) / p)),
                _ => x,
            };
        }
    }

    fn fixed_or_ext<R: Rng>(&self, rng: &mut R, ext_prob: f64) -> Arc<ExtensionTower> {
        if rng.gen_bool(ext_prob) {
            self.exts.choose(rng).unwrap().clone()
        } else {
            self.ground.clone()
        }
    }

    fn quadratic<R: Rng>(&self, rng: &mut R, t: &Arc<ExtensionTower>, split_prob: f64) -> Result<Arc<QuadraticEtale>> {
        if rng.gen_bool(split_prob) {
            return Ok(QuadraticEtale::split(t));
        }
        let classes: Vec<SquareClass> = SquareClass::all(t).into_iter().filter(|c| !c.is_one()).collect();
        QuadraticEtale::field(t, classes.choose(rng).unwrap().representative(t))
    }

    /// A random invertible element of the algebra outside the base.
    fn generic<R: Rng>(&self, rng: &mut R, alg: &Arc<QuadraticEtale>) -> EtaleElement {
        loop {
            let w = alg.elem(self.element(rng, alg.base()), self.element(rng, alg.base()));
            if !w.norm().is_zero() {
                return w;
            }
        }
    }

    fn square_class_rep(&self, x: &FieldElement) -> Result<FieldElement> {
        Ok(localfield::square_class(x)?.representative(&self.ground))
    }

    fn rep_of_q(&self, x: &crate::arith::Q) -> Result<FieldElement> {
        self.square_class_rep(&self.ground.from_q(x))
    }

    /// A tame character of E^× restricting to sgn_{E/F}^m on F^×.
    pub fn character<R: Rng>(&self, rng: &mut R, e: &Arc<QuadraticEtale>, m: u32) -> Result<TameCharacter> {
        let le = LocalE::new(e)?;
        let qe = le.residue_size() as i64;
        let mut found = Vec::new();
        for num in 0..12 {
            for k in 0..qe - 1 {
                let mu = TameCharacter {
                    angle_pi: q(num) / q(12),
                    k,
                };
                if mu.restricts_to_sign_power(&le, m)? {
                    found.push(mu);
                }
            }
        }
        Ok(found.choose(rng).expect("some tame character has the required restriction").clone())
    }

    /// A random instance passing every validation rule.
    pub fn instance<R: Rng>(&self, rng: &mut R, fc: FormulaCase, shape: &Shape) -> Result<Instance> {
        for _ in 0..MAX_ATTEMPTS {
            if let Some(inst) = self.try_instance(rng, fc, shape)? {
                return Ok(inst);
            }
        }
        Err(crate::Error::Invalid(format!(
            "no valid {} instance with {} minus and {} plus indices after {MAX_ATTEMPTS} attempts",
            fc.name(),
            shape.minus,
            shape.plus
        )))
    }

    fn try_instance<R: Rng>(&self, rng: &mut R, fc: FormulaCase, shape: &Shape) -> Result<Option<Instance>> {
        let case = fc.group_case();
        let t = &self.ground;
        let e = if case.is_unitary_type() {
            let classes: Vec<SquareClass> = SquareClass::all(t).into_iter().filter(|c| !c.is_one()).collect();
            Some(QuadraticEtale::field(t, classes.choose(rng).unwrap().representative(t))?)
        } else {
            None
        };
        let (km, kp) = case.factor_kinds();
        let mut indices = Vec::new();
        let mut dims = [0usize; 2];
        for (k, (side, count)) in [(Side::Minus, shape.minus), (Side::Plus, shape.plus)].into_iter().enumerate() {
            for j in 0..count {
                let base = self.fixed_or_ext(rng, shape.ext_prob);
                let alg = match &e {
                    Some(e) => QuadraticEtale::tensor_with(&base, e)?,
                    None => self.quadratic(rng, &base, shape.split_prob)?,
                };
                dims[k] += if e.is_some() { base.n() } else { alg.degree() };
                let w = self.generic(rng, &alg);
                let y = w.div(&w.tau())?;
                indices.push((side, format!("{}{}", if side == Side::Minus { "m" } else { "p" }, j + 1), alg, w, y));
            }
        }
        let d_minus = dims[0] + km.extra_line();
        let d_plus = dims[1] + kp.extra_line();
        let d = match case {
            GroupCase::SoOdd | GroupCase::TwistedGlEven => d_minus + d_plus - 1,
            _ => d_minus + d_plus,
        };
        if d == 0 || FormulaCase::of(case, d) != fc {
            return Ok(None);
        }
        let nu = match case {
            GroupCase::TwistedGlEven | GroupCase::TwistedGlOdd => Some(Scalar::F(self.element(rng, t))),
            GroupCase::BcUnitary => {
                let e = e.as_ref().unwrap();
                Some(Scalar::E(e.elem(self.element(rng, t), self.element(rng, t))))
            }
            _ => None,
        };
        let eta = match case {
            GroupCase::TwistedGlOdd => {
                let Some(Scalar::F(nu)) = &nu else { unreachable!() };
                Scalar::F(eta_from_nu(nu))
            }
            GroupCase::Unitary => {
                let e = e.as_ref().unwrap();
                let r = e.from_base(&self.element(rng, t));
                Scalar::E(if d % 2 == 0 { r.mul(&e.s()) } else { r })
            }
            GroupCase::BcUnitary => {
                let e = e.as_ref().unwrap();
                let Some(Scalar::E(nu)) = &nu else { unreachable!() };
                Scalar::E(nu.mul(&e.from_base(&self.element(rng, t))))
            }
            _ => Scalar::F(self.element(rng, t)),
        };
        let mut params = Vec::new();
        for (side, id, alg, w, y) in indices {
            let base = alg.base().clone();
            let lam = alg.from_base(&self.element(rng, &base));
            let (x, c) = match case {
                GroupCase::Symplectic => (None, Some(alg.s().mul(&lam))),
                GroupCase::SoOdd | GroupCase::SoEven | GroupCase::Unitary => (None, Some(lam)),
                _ => {
                    let mut x = w.mul(&lam);
                    if d % 2 == 0 {
                        x = x.mul(&alg.s());
                    }
                    if let Some(nu) = &nu {
                        x = x.mul(&nu.embed(&alg)?);
                    }
                    (Some(x), None)
                }
            };
            params.push(IndexParam {
                id,
                side,
                alg,
                y,
                x,
                c,
                c_endo: None,
            });
        }
        let disc = |side: Side| -> Result<FieldElement> {
            let prod = params
                .iter()
                .filter(|ip| ip.side == side)
                .fold(q(1), |acc, ip| acc * ip.alg.delta().norm_to_base());
            self.rep_of_q(&prod)
        };
        let delta_minus = if km == FactorKind::OrthogonalEven { Some(disc(Side::Minus)?) } else { None };
        let delta_plus = if kp == FactorKind::OrthogonalEven { Some(disc(Side::Plus)?) } else { None };
        let delta = match (case, &delta_minus, &delta_plus) {
            (GroupCase::SoEven, Some(a), Some(b)) => Some(self.square_class_rep(&a.mul(b))?),
            _ => None,
        };
        let chi = if case == GroupCase::TwistedGlOdd {
            Some(SquareClass::all(t).choose(rng).unwrap().representative(t))
        } else {
            None
        };
        let (mu_minus, mu_plus) = match (&e, case) {
            (Some(e), GroupCase::Unitary) => (
                Some(self.character(rng, e, d_plus as u32)?),
                Some(self.character(rng, e, d_minus as u32)?),
            ),
            (Some(e), GroupCase::BcUnitary) => (
                Some(self.character(rng, e, d_plus as u32 + 1)?),
                Some(self.character(rng, e, d_minus as u32)?),
            ),
            _ => (None, None),
        };
        let x_d = if case == GroupCase::TwistedGlOdd { Some(self.element(rng, t)) } else { None };
        let inst = Instance {
            group: GroupDescriptor {
                case,
                d,
                ground: t.clone(),
                delta,
                e,
                nu,
                eta,
            },
            endo: EndoscopicDatum {
                d_minus,
                d_plus,
                delta_minus,
                delta_plus,
                chi,
                mu_minus,
                mu_plus,
                cocycle: CocycleClass::Trivial,
            },
            param: RegularParam { indices: params, x_d },
        };
        if !validate_instance(&inst)?.is_empty() {
            return Ok(None);
        }
        if matches!(case, GroupCase::SoOdd | GroupCase::SoEven) {
            let mut inst = inst;
            inst.endo.cocycle = crate::factor::orthogonal_cocycle_class(&inst)?;
            return Ok(Some(inst));
        }
        Ok(Some(inst))
    }

    /// A random element of F_i^× for norm-class rescaling.
    pub fn unit_of<R: Rng>(&self, rng: &mut R, alg: &Arc<QuadraticEtale>) -> EtaleElement {
        self.generic(rng, alg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_case_samples_valid_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = Sampler::new(5).unwrap();
        for fc in FormulaCase::ALL {
            for _ in 0..5 {
                let minus = rng.gen_range(1..=2);
                let plus = rng.gen_range(0..=2);
                let inst = s.instance(&mut rng, fc, &Shape::new(5, minus, plus)).unwrap();
                assert!(validate_instance(&inst).unwrap().is_empty(), "{}", fc.name());
                assert_eq!(FormulaCase::of(inst.group.case, inst.group.d), fc);
            }
        }
    }
}
