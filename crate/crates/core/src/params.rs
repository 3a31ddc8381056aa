//! Groups, endoscopic data and regular parameters, with their validation and
//! the matching of stable classes.

use crate::arith::poly::QPoly;
use crate::arith::q;
use crate::error::{Error, Result};
use crate::etale::{EtaleElement, QuadraticEtale};
use crate::factor::character::{LocalE, TameCharacter};
use crate::localfield::{self, ExtensionTower, FieldElement};
use num_traits::Zero;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupCase {
    Symplectic,
    SoOdd,
    SoEven,
    TwistedGlEven,
    TwistedGlOdd,
    Unitary,
    BcUnitary,
}

impl GroupCase {
    pub const ALL: [GroupCase; 7] = [
        GroupCase::Symplectic,
        GroupCase::SoOdd,
        GroupCase::SoEven,
        GroupCase::TwistedGlEven,
        GroupCase::TwistedGlOdd,
        GroupCase::Unitary,
        GroupCase::BcUnitary,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GroupCase::Symplectic => "symplectic",
            GroupCase::SoOdd => "so_odd",
            GroupCase::SoEven => "so_even",
            GroupCase::TwistedGlEven => "twisted_gl_even",
            GroupCase::TwistedGlOdd => "twisted_gl_odd",
            GroupCase::Unitary => "unitary",
            GroupCase::BcUnitary => "bc_unitary",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|c| c.name() == s)
    }

    pub fn is_twisted(&self) -> bool {
        matches!(self, GroupCase::TwistedGlEven | GroupCase::TwistedGlOdd | GroupCase::BcUnitary)
    }

    pub fn is_unitary_type(&self) -> bool {
        matches!(self, GroupCase::Unitary | GroupCase::BcUnitary)
    }

    /// Types of the two endoscopic factors (H^-, H^+).
    pub fn factor_kinds(&self) -> (FactorKind, FactorKind) {
        use FactorKind::*;
        match self {
            GroupCase::Symplectic => (OrthogonalEven, Symplectic),
            GroupCase::SoOdd => (OrthogonalOdd, OrthogonalOdd),
            GroupCase::SoEven => (OrthogonalEven, OrthogonalEven),
            GroupCase::TwistedGlEven => (OrthogonalEven, OrthogonalOdd),
            GroupCase::TwistedGlOdd => (OrthogonalOdd, Symplectic),
            GroupCase::Unitary | GroupCase::BcUnitary => (Unitary, Unitary),
        }
    }
}

impl fmt::Display for GroupCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// The shape of an endoscopic factor H^±.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Symplectic,
    OrthogonalOdd,
    OrthogonalEven,
    Unitary,
}

impl FactorKind {
    /// Dimension of the factor minus the dimension carried by its indices.
    pub fn extra_line(&self) -> usize {
        usize::from(*self == FactorKind::OrthogonalOdd)
    }
}

/// The nine displays of the transfer-factor formulary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaCase {
    Symplectic,
    SoOdd,
    SoEven,
    TwistedGlEven,
    TwistedGlOdd,
    UnitaryEven,
    UnitaryOdd,
    BcUnitaryEven,
    BcUnitaryOdd,
}

impl FormulaCase {
    pub const ALL: [FormulaCase; 9] = [
        FormulaCase::Symplectic,
        FormulaCase::SoOdd,
        FormulaCase::SoEven,
        FormulaCase::TwistedGlEven,
        FormulaCase::TwistedGlOdd,
        FormulaCase::UnitaryEven,
        FormulaCase::UnitaryOdd,
        FormulaCase::BcUnitaryEven,
        FormulaCase::BcUnitaryOdd,
    ];

    pub fn of(case: GroupCase, d: usize) -> Self {
        let even = d.is_multiple_of(2);
        match case {
            GroupCase::Symplectic => FormulaCase::Symplectic,
            GroupCase::SoOdd => FormulaCase::SoOdd,
            GroupCase::SoEven => FormulaCase::SoEven,
            GroupCase::TwistedGlEven => FormulaCase::TwistedGlEven,
            GroupCase::TwistedGlOdd => FormulaCase::TwistedGlOdd,
            GroupCase::Unitary if even => FormulaCase::UnitaryEven,
            GroupCase::Unitary => FormulaCase::UnitaryOdd,
            GroupCase::BcUnitary if even => FormulaCase::BcUnitaryEven,
            GroupCase::BcUnitary => FormulaCase::BcUnitaryOdd,
        }
    }

    pub fn group_case(&self) -> GroupCase {
        match self {
            FormulaCase::Symplectic => GroupCase::Symplectic,
            FormulaCase::SoOdd => GroupCase::SoOdd,
            FormulaCase::SoEven => GroupCase::SoEven,
            FormulaCase::TwistedGlEven => GroupCase::TwistedGlEven,
            FormulaCase::TwistedGlOdd => GroupCase::TwistedGlOdd,
            FormulaCase::UnitaryEven | FormulaCase::UnitaryOdd => GroupCase::Unitary,
            FormulaCase::BcUnitaryEven | FormulaCase::BcUnitaryOdd => GroupCase::BcUnitary,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FormulaCase::Symplectic => "symplectic",
            FormulaCase::SoOdd => "so_odd",
            FormulaCase::SoEven => "so_even",
            FormulaCase::TwistedGlEven => "twisted_gl_even",
            FormulaCase::TwistedGlOdd => "twisted_gl_odd",
            FormulaCase::UnitaryEven => "unitary_even",
            FormulaCase::UnitaryOdd => "unitary_odd",
            FormulaCase::BcUnitaryEven => "bc_unitary_even",
            FormulaCase::BcUnitaryOdd => "bc_unitary_odd",
        }
    }
}

/// A scalar of the ground field F or of E.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    F(FieldElement),
    E(EtaleElement),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::F(x) => x.is_zero(),
            Scalar::E(x) => x.is_zero(),
        }
    }

    /// Image in F_i: F-values are rational, E-values map s_E ↦ s.
    pub fn embed(&self, alg: &Arc<QuadraticEtale>) -> Result<EtaleElement> {
        match self {
            Scalar::F(x) => {
                let r = x
                    .as_rational()
                    .ok_or_else(|| Error::Invalid("scalar is not in the base field".into()))?;
                Ok(alg.from_q(&r))
            }
            Scalar::E(x) => alg.embed_from(x),
        }
    }

    pub fn as_f(&self) -> Option<&FieldElement> {
        match self {
            Scalar::F(x) => Some(x),
            Scalar::E(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::F(x) => write!(f, "{x}"),
            Scalar::E(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupDescriptor {
    pub case: GroupCase,
    pub d: usize,
    /// The base field F as a degree-one tower.
    pub ground: Arc<ExtensionTower>,
    /// Discriminant class (so_even).
    pub delta: Option<FieldElement>,
    /// Quadratic extension E (unitary cases).
    pub e: Option<Arc<QuadraticEtale>>,
    /// ν of the twisted form θ̃ (twisted cases).
    pub nu: Option<Scalar>,
    pub eta: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CocycleClass {
    Trivial,
    Nontrivial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EndoscopicDatum {
    pub d_minus: usize,
    pub d_plus: usize,
    pub delta_minus: Option<FieldElement>,
    pub delta_plus: Option<FieldElement>,
    /// Square class a with χ(x) = (x, a) (twisted_gl_odd).
    pub chi: Option<FieldElement>,
    pub mu_minus: Option<TameCharacter>,
    pub mu_plus: Option<TameCharacter>,
    pub cocycle: CocycleClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn name(&self) -> &'static str {
        match self {
            Side::Minus => "minus",
            Side::Plus => "plus",
        }
    }
}

/// One index i: F_{±i}, F_i, the endoscopic y_i and the G-side data.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexParam {
    pub id: String,
    pub side: Side,
    pub alg: Arc<QuadraticEtale>,
    pub y: EtaleElement,
    /// G-side x_i; equals y_i in untwisted cases and may be omitted there.
    pub x: Option<EtaleElement>,
    /// G-side c_i (symplectic, orthogonal and unitary cases).
    pub c: Option<EtaleElement>,
    /// c_i of the endoscopic factor containing i, when its trace form is needed.
    pub c_endo: Option<EtaleElement>,
}

impl IndexParam {
    pub fn base(&self) -> &Arc<ExtensionTower> {
        self.alg.base()
    }

    /// x_i, falling back to y_i.
    pub fn x_or_y(&self) -> &EtaleElement {
        self.x.as_ref().unwrap_or(&self.y)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularParam {
    pub indices: Vec<IndexParam>,
    pub x_d: Option<FieldElement>,
}

impl RegularParam {
    pub fn side(&self, s: Side) -> impl Iterator<Item = &IndexParam> {
        self.indices.iter().filter(move |i| i.side == s)
    }
}

/// A full transfer-factor problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub group: GroupDescriptor,
    pub endo: EndoscopicDatum,
    pub param: RegularParam,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.detail)
    }
}

fn violation(out: &mut Vec<Violation>, rule: &'static str, detail: impl Into<String>) {
    out.push(Violation {
        rule,
        detail: detail.into(),
    });
}

fn is_square_or_err(x: &FieldElement) -> Result<bool> {
    localfield::is_square(x)
}

pub fn validate_group(g: &GroupDescriptor) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    let need_even = matches!(
        g.case,
        GroupCase::Symplectic | GroupCase::SoEven | GroupCase::TwistedGlEven
    );
    let need_odd = matches!(g.case, GroupCase::SoOdd | GroupCase::TwistedGlOdd);
    if need_even && !g.d.is_multiple_of(2) {
        violation(&mut out, "parity", format!("{} needs even d, got {}", g.case, g.d));
    }
    if need_odd && g.d.is_multiple_of(2) {
        violation(&mut out, "parity", format!("{} needs odd d, got {}", g.case, g.d));
    }
    if g.eta.is_zero() {
        violation(&mut out, "eta", "η must be invertible");
    }
    match g.case {
        GroupCase::SoEven => match &g.delta {
            None => violation(&mut out, "discriminant", "so_even needs the discriminant δ"),
            Some(delta) if delta.is_zero() => violation(&mut out, "discriminant", "δ must be nonzero"),
            Some(delta) => {
                if g.d == 2 && is_square_or_err(delta)? {
                    violation(&mut out, "even orthogonal exclusion", "d = 2 with δ = 1 is excluded");
                }
            }
        },
        GroupCase::Unitary | GroupCase::BcUnitary => match &g.e {
            None => violation(&mut out, "quadratic extension", "unitary cases need E"),
            Some(e) => {
                if !e.is_field() {
                    violation(&mut out, "quadratic extension", "E must be a field");
                }
                if g.ground.base.is_real() {
                    violation(&mut out, "unitary base", "unitary cases over R are not supported");
                } else if g.ground.p() == Some(2) {
                    violation(&mut out, "unitary base", "unitary cases need odd residue characteristic");
                }
            }
        },
        _ => {}
    }
    if g.case.is_unitary_type() {
        if let Scalar::F(_) = g.eta {
            violation(&mut out, "eta", "η must be given in E for unitary cases");
        }
    } else if let Scalar::E(_) = g.eta {
        violation(&mut out, "eta", "η must lie in F");
    }
    if g.case == GroupCase::Unitary {
        if let Scalar::E(eta) = &g.eta {
            if g.d % 2 == 1 && !eta.is_fixed() {
                violation(&mut out, "unitary eta", "for odd d, η must lie in F");
            }
            if g.d.is_multiple_of(2) && !eta.is_anti_fixed() {
                violation(&mut out, "unitary eta", "for even d, τ(η) = −η is required");
            }
        }
    }
    if g.case.is_twisted() {
        match (&g.nu, g.case) {
            (None, _) => violation(&mut out, "twisted nu", "twisted cases need ν"),
            (Some(nu), _) if nu.is_zero() => violation(&mut out, "twisted nu", "ν must be invertible"),
            (Some(Scalar::E(_)), GroupCase::TwistedGlEven | GroupCase::TwistedGlOdd) => {
                violation(&mut out, "twisted nu", "ν must lie in F")
            }
            (Some(Scalar::F(_)), GroupCase::BcUnitary) => {
                violation(&mut out, "twisted nu", "ν must be given in E")
            }
            (Some(Scalar::E(nu)), GroupCase::BcUnitary) => {
                if let Scalar::E(eta) = &g.eta {
                    if let Ok(r) = eta.div(nu) {
                        if !r.is_fixed() {
                            violation(&mut out, "base change eta", "η/ν must lie in F");
                        }
                    }
                }
            }
            _ => {}
        }
    }
    Ok(out)
}

pub fn validate_endoscopic(g: &GroupDescriptor, e: &EndoscopicDatum) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    let (km, kp) = g.case.factor_kinds();
    let sum = e.d_minus + e.d_plus;
    let want = match g.case {
        GroupCase::SoOdd | GroupCase::TwistedGlEven => g.d + 1,
        _ => g.d,
    };
    if sum != want {
        violation(
            &mut out,
            "dimension sum",
            format!("d^- + d^+ = {sum}, expected {want} for {}", g.case),
        );
    }
    for (kind, dim, label) in [(km, e.d_minus, "d^-"), (kp, e.d_plus, "d^+")] {
        let bad = match kind {
            FactorKind::Symplectic | FactorKind::OrthogonalEven => dim % 2 != 0,
            FactorKind::OrthogonalOdd => dim % 2 != 1,
            FactorKind::Unitary => false,
        };
        if bad {
            violation(&mut out, "factor parity", format!("{label} = {dim} has the wrong parity"));
        }
    }
    for (kind, dim, delta, label) in [
        (km, e.d_minus, &e.delta_minus, "minus"),
        (kp, e.d_plus, &e.delta_plus, "plus"),
    ] {
        if kind != FactorKind::OrthogonalEven {
            continue;
        }
        match delta {
            None => violation(&mut out, "discriminant", format!("the {label} factor needs δ")),
            Some(dl) if dl.is_zero() => violation(&mut out, "discriminant", "δ must be nonzero"),
            Some(dl) => {
                let sq = is_square_or_err(dl)?;
                if dim == 2 && sq {
                    violation(
                        &mut out,
                        "ellipticity",
                        format!("the {label} factor has dimension 2 and trivial discriminant"),
                    );
                }
                if dim == 0 && !sq {
                    violation(&mut out, "discriminant", format!("the {label} factor has d = 0, so δ = 1"));
                }
            }
        }
    }
    if g.case == GroupCase::SoEven {
        if let (Some(dm), Some(dp), Some(d)) = (&e.delta_minus, &e.delta_plus, &g.delta) {
            if !dm.is_zero() && !dp.is_zero() && !d.is_zero() && !is_square_or_err(&dm.mul(dp).mul(d))? {
                violation(&mut out, "discriminant product", "δ^- δ^+ must equal δ");
            }
        }
    }
    if g.case == GroupCase::TwistedGlOdd {
        match &e.chi {
            None => violation(&mut out, "chi", "twisted_gl_odd needs χ"),
            Some(a) if a.is_zero() => violation(&mut out, "chi", "χ must be a nonzero square class"),
            _ => {}
        }
    }
    if g.case.is_unitary_type() {
        let (m_minus, m_plus) = if g.case == GroupCase::Unitary {
            (e.d_plus as u32, e.d_minus as u32)
        } else {
            (e.d_plus as u32 + 1, e.d_minus as u32)
        };
        match (&g.e, &e.mu_minus, &e.mu_plus) {
            (Some(ealg), Some(mm), Some(mp)) if ealg.is_field() && !g.ground.base.is_real() && g.ground.p() != Some(2) => {
                let le = LocalE::new(ealg)?;
                if !mm.restricts_to_sign_power(&le, m_minus)? {
                    violation(
                        &mut out,
                        "character restriction",
                        format!("μ^- must restrict to sgn_E/F^{m_minus} on F^×"),
                    );
                }
                if !mp.restricts_to_sign_power(&le, m_plus)? {
                    violation(
                        &mut out,
                        "character restriction",
                        format!("μ^+ must restrict to sgn_E/F^{m_plus} on F^×"),
                    );
                }
            }
            (_, None, _) | (_, _, None) => violation(&mut out, "character restriction", "unitary cases need μ^- and μ^+"),
            _ => {}
        }
    }
    Ok(out)
}

/// [F_i : ground] with ground = E in unitary cases.
fn index_dim(case: GroupCase, ip: &IndexParam) -> usize {
    if case.is_unitary_type() {
        ip.base().n()
    } else {
        ip.alg.degree()
    }
}

pub fn validate_param(inst: &Instance) -> Result<Vec<Violation>> {
    let g = &inst.group;
    let e = &inst.endo;
    let p = &inst.param;
    let mut out = Vec::new();
    let (km, kp) = g.case.factor_kinds();
    let mut ids = std::collections::HashSet::new();
    for ip in &p.indices {
        if !ids.insert(ip.id.as_str()) {
            violation(&mut out, "index ids", format!("index {} appears twice", ip.id));
        }
        if ip.base().base != g.ground.base {
            violation(&mut out, "base field", format!("index {} lives over another base field", ip.id));
        }
    }
    for (kind, dim, side) in [(km, e.d_minus, Side::Minus), (kp, e.d_plus, Side::Plus)] {
        let total: usize = p.side(side).map(|ip| index_dim(g.case, ip)).sum();
        if total + kind.extra_line() != dim {
            violation(
                &mut out,
                "index dimension",
                format!(
                    "indices on the {} side span {total}, the factor needs {}",
                    side.name(),
                    dim.saturating_sub(kind.extra_line())
                ),
            );
        }
        if kind == FactorKind::OrthogonalEven {
            let delta = if side == Side::Minus { &e.delta_minus } else { &e.delta_plus };
            if let Some(delta) = delta {
                let prod = p
                    .side(side)
                    .fold(q(1), |acc, ip| acc * ip.alg.delta().norm_to_base());
                if !delta.is_zero() && !prod.is_zero() {
                    let r = g.ground.from_q(&prod).mul(delta);
                    if !localfield::is_square(&r)? {
                        violation(
                            &mut out,
                            "discriminant",
                            format!(
                                "δ of the {} factor differs from the product of Norm(δ_i)",
                                side.name()
                            ),
                        );
                    }
                }
            }
        }
    }
    if g.case.is_unitary_type() {
        if let Some(ealg) = &g.e {
            let de = ealg.delta().as_rational();
            for ip in &p.indices {
                if ip.alg.delta().as_rational() != de {
                    violation(
                        &mut out,
                        "unitary algebra",
                        format!("F_i for index {} must be F_±i ⊗ E with s² = δ_E", ip.id),
                    );
                }
            }
        }
    }
    for ip in &p.indices {
        if !ip.y.norm().is_one() {
            violation(&mut out, "norm one", format!("y_{} τ(y_{}) ≠ 1", ip.id, ip.id));
        }
        let want_c = matches!(
            g.case,
            GroupCase::Symplectic | GroupCase::SoOdd | GroupCase::SoEven | GroupCase::Unitary
        );
        if want_c {
            match &ip.c {
                None => violation(&mut out, "coefficients", format!("index {} needs c_i", ip.id)),
                Some(c) => {
                    if c.norm().is_zero() {
                        violation(&mut out, "coefficients", format!("c_{} is not invertible", ip.id));
                    } else if g.case == GroupCase::Symplectic && !c.is_anti_fixed() {
                        violation(&mut out, "coefficient symmetry", format!("τ(c_{0}) = −c_{0} fails", ip.id));
                    } else if g.case != GroupCase::Symplectic && !c.is_fixed() {
                        violation(&mut out, "coefficient symmetry", format!("τ(c_{0}) = c_{0} fails", ip.id));
                    }
                }
            }
        }
        if g.case.is_twisted() {
            match &ip.x {
                None => violation(&mut out, "coefficients", format!("index {} needs x_i", ip.id)),
                Some(x) if x.norm().is_zero() => {
                    violation(&mut out, "coefficients", format!("x_{} is not invertible", ip.id))
                }
                _ => {}
            }
        }
        if let Some(ce) = &ip.c_endo {
            let kind = if ip.side == Side::Minus { km } else { kp };
            let ok = if kind == FactorKind::Symplectic {
                ce.is_anti_fixed()
            } else {
                ce.is_fixed()
            };
            if !ok || ce.norm().is_zero() {
                violation(
                    &mut out,
                    "coefficient symmetry",
                    format!("endoscopic coefficient of index {} has the wrong symmetry", ip.id),
                );
            }
        }
    }
    if g.case == GroupCase::TwistedGlOdd {
        match &p.x_d {
            None => violation(&mut out, "coefficients", "twisted_gl_odd needs x_D"),
            Some(x) if x.is_zero() => violation(&mut out, "coefficients", "x_D must be nonzero"),
            _ => {}
        }
    }
    if out.is_empty() {
        if !check_regularity(g, p)? {
            violation(&mut out, "regularity", "the parameters are not sufficiently regular");
        } else if !match_stable_classes(g, p)? {
            violation(&mut out, "matching", "the stable classes of x and y do not correspond");
        }
    }
    Ok(out)
}

/// Every violation for an instance: group, endoscopic datum, then parameters.
pub fn validate_instance(inst: &Instance) -> Result<Vec<Violation>> {
    let mut out = validate_group(&inst.group)?;
    if out.is_empty() {
        out.extend(validate_endoscopic(&inst.group, &inst.endo)?);
    }
    if out.is_empty() {
        out.extend(validate_param(inst)?);
    }
    Ok(out)
}

/// The product of the characteristic polynomials of all y_i over F.
pub fn full_charpoly(p: &RegularParam) -> QPoly {
    p.indices
        .iter()
        .fold(QPoly::one(&q(0)), |acc, ip| acc.mul(&ip.y.charpoly_over_f()))
}

/// Squarefree characteristic polynomial without roots ±1.
pub fn check_regularity(_g: &GroupDescriptor, p: &RegularParam) -> Result<bool> {
    let poly = full_charpoly(p);
    if poly.degree().unwrap_or(0) == 0 {
        return Ok(true);
    }
    Ok(poly.is_squarefree() && !poly.eval(&q(1)).is_zero() && !poly.eval(&q(-1)).is_zero())
}

/// The matching relation: x_i = y_i, or x_i/τ(x_i) = (−1)^{d+1} y_i ν/τ_i(ν) when twisted.
pub fn match_stable_classes(g: &GroupDescriptor, p: &RegularParam) -> Result<bool> {
    for ip in &p.indices {
        if !g.case.is_twisted() {
            if let Some(x) = &ip.x {
                if x != &ip.y {
                    return Ok(false);
                }
            }
            continue;
        }
        let x = ip
            .x
            .as_ref()
            .ok_or_else(|| Error::IndexMismatch(format!("index {} has no x_i", ip.id)))?;
        let nu = g
            .nu
            .as_ref()
            .ok_or_else(|| Error::IndexMismatch("twisted case without ν".into()))?
            .embed(&ip.alg)?;
        let sign = if g.d % 2 == 1 { 1 } else { -1 };
        let lhs = x.div(&x.tau())?;
        let rhs = ip.y.mul(&nu).div(&nu.tau())?.scale(&ip.base().from_int(sign));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Canonical key of the stable class: c_i forgotten, x_i taken modulo F_{±i}^×,
/// x_D dropped.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StableKey(pub Vec<String>);

pub fn stable_class_of(g: &GroupDescriptor, p: &RegularParam) -> Result<StableKey> {
    let mut parts = Vec::new();
    for ip in &p.indices {
        let mut s = format!("{} | y = {}", ip.alg, ip.y);
        if g.case.is_twisted() {
            if let Some(x) = &ip.x {
                let class = if x.b.is_zero() {
                    "F±".to_string()
                } else {
                    x.a.div(&x.b)?.to_string()
                };
                s.push_str(&format!(" | x ~ {class}"));
            }
        }
        parts.push(s);
    }
    parts.sort();
    Ok(StableKey(parts))
}
