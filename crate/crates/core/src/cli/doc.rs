//! The JSON instance document and its conversion to and from [`Instance`].
//!
//! ```json
//! {
//!   "base": { "p": 5 },
//!   "towers": { "K": { "f": 2, "eisenstein": ["-5", "1"] } },
//!   "group": { "case": "symplectic", "d": 2, "eta": "1" },
//!   "endoscopic": { "d_minus": 2, "d_plus": 0 },
//!   "indices": [
//!     { "id": "a", "side": "minus", "delta": "2", "y": "(3 + 4*s)/5", "c": "s" }
//!   ]
//! }
//! ```
//!
//! Every element is a literal string. Index literals live in F_i, where `s`
//! is the square root of the index `delta` (or of δ_E in the unitary cases,
//! where `delta` is omitted). The scalars η and ν are read in E for unitary
//! and base-change groups. `tower` names an entry of `towers`; the default
//! `F` is the base field itself.

use super::expr::{parse_etale, parse_field};
use crate::arith::{fmt_q, Q};
use crate::error::{Error, Result};
use crate::etale::{EtaleElement, QuadraticEtale};
use crate::factor::character::TameCharacter;
use crate::localfield::{BaseField, ExtensionTower, FieldElement};
use crate::params::{
    CocycleClass, EndoscopicDatum, GroupCase, GroupDescriptor, IndexParam, Instance, RegularParam, Scalar, Side,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub base: BaseSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub towers: BTreeMap<String, TowerSpec>,
    pub group: GroupSpec,
    pub endoscopic: EndoscopicSpec,
    pub indices: Vec<IndexSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_d: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    /// Residue characteristic; omit and set `real` for R.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub real: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
}

/// An Eisenstein coefficient: a rational, or a list of rationals giving a
/// polynomial in u of degree below f.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Rational(String),
    Unramified(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    pub f: usize,
    /// Lift of the residue modulus, increasing degree; a default is chosen when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<String>>,
    /// Eisenstein polynomial, increasing degree.
    pub eisenstein: Vec<Coefficient>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub case: String,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    /// δ_E with E = F(√δ_E).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<String>,
    pub eta: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterSpec {
    /// μ(ϖ_E) = e^{2πi·angle_pi}.
    pub angle_pi: String,
    /// Exponent on the residue character.
    pub k: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoscopicSpec {
    pub d_minus: usize,
    pub d_plus: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_minus: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_plus: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_minus: Option<CharacterSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_plus: Option<CharacterSpec>,
    /// `trivial` or `nontrivial`; computed from the data when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexSpec {
    pub id: String,
    pub side: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<String>,
    /// `split`, or a non-square of F_{±i}.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    pub y: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_endo: Option<String>,
}

/// Finds the line and column of a literal inside the source text.
struct Locator<'a> {
    src: &'a str,
}

impl Locator<'_> {
    fn position(&self, literal: &str) -> (usize, usize) {
        let quoted = format!("\"{literal}\"");
        let Some(at) = self.src.find(&quoted) else {
            return (1, 1);
        };
        let before = &self.src[..=at];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(1, |l| l.chars().count() + 1);
        (line, col)
    }

    fn field(&self, lit: &str, t: &Arc<ExtensionTower>) -> Result<FieldElement> {
        parse_field(lit, t).map_err(|e| {
            let (l, c) = self.position(lit);
            e.at(l, c)
        })
    }

    fn etale(&self, lit: &str, a: &Arc<QuadraticEtale>) -> Result<EtaleElement> {
        parse_etale(lit, a).map_err(|e| {
            let (l, c) = self.position(lit);
            e.at(l, c)
        })
    }

    fn rational(&self, lit: &str, t: &Arc<ExtensionTower>) -> Result<Q> {
        self.field(lit, t)?
            .as_rational()
            .ok_or_else(|| Error::Invalid(format!("'{lit}' is not a rational number")))
    }
}

/// Parse document text; JSON errors carry their line and column.
pub fn parse_document(src: &str) -> Result<InstanceDocument> {
    serde_json::from_str(src).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parse and build an instance from document text.
pub fn load_instance(src: &str, precision: Option<u32>) -> Result<Instance> {
    let doc = parse_document(src)?;
    build_instance(&doc, src, precision)
}

fn base_field(spec: &BaseSpec, precision: Option<u32>) -> Result<BaseField> {
    match (spec.p, spec.real) {
        (Some(p), false) => BaseField::padic_with_precision(p, precision.or(spec.precision).unwrap_or(64)),
        (None, true) => Ok(BaseField::real()),
        _ => Err(Error::Invalid("base needs exactly one of p and real".into())),
    }
}

/// Build the instance described by `doc`; `src` is used to locate literal errors.
pub fn build_instance(doc: &InstanceDocument, src: &str, precision: Option<u32>) -> Result<Instance> {
    let loc = Locator { src };
    let base = base_field(&doc.base, precision)?;
    let ground = base.trivial_tower();
    let mut towers: BTreeMap<&str, Arc<ExtensionTower>> = BTreeMap::new();
    towers.insert("F", ground.clone());
    for (name, spec) in &doc.towers {
        let eis: Vec<Vec<Q>> = spec
            .eisenstein
            .iter()
            .map(|c| match c {
                Coefficient::Rational(r) => Ok(vec![loc.rational(r, &ground)?]),
                Coefficient::Unramified(v) => v.iter().map(|r| loc.rational(r, &ground)).collect(),
            })
            .collect::<Result<_>>()?;
        let t = match &spec.modulus {
            Some(m) => {
                let g = m.iter().map(|r| loc.rational(r, &ground)).collect::<Result<Vec<_>>>()?;
                if g.len() != spec.f + 1 {
                    return Err(Error::Invalid(format!("tower {name}: modulus degree differs from f")));
                }
                ExtensionTower::with_modulus(base, g, &eis)?
            }
            None => ExtensionTower::new(base, spec.f, &eis)?,
        };
        towers.insert(name, t);
    }

    let g = &doc.group;
    let case = GroupCase::from_name(&g.case).ok_or_else(|| Error::Invalid(format!("unknown group case '{}'", g.case)))?;
    let f_lit = |s: &Option<String>| s.as_ref().map(|s| loc.field(s, &ground)).transpose();
    let e = match &g.e {
        Some(de) => Some(QuadraticEtale::new(&ground, loc.field(de, &ground)?)?),
        None => None,
    };
    let scalar = |s: &str| -> Result<Scalar> {
        match (&e, case.is_unitary_type()) {
            (Some(e), true) => Ok(Scalar::E(loc.etale(s, e)?)),
            (None, true) => Err(Error::Invalid(format!("{} needs the field E", case.name()))),
            _ => Ok(Scalar::F(loc.field(s, &ground)?)),
        }
    };
    let group = GroupDescriptor {
        case,
        d: g.d,
        ground: ground.clone(),
        delta: f_lit(&g.delta)?,
        e: e.clone(),
        nu: g.nu.as_deref().map(scalar).transpose()?,
        eta: scalar(&g.eta)?,
    };

    let ed = &doc.endoscopic;
    let character = |c: &Option<CharacterSpec>| -> Result<Option<TameCharacter>> {
        c.as_ref()
            .map(|c| {
                Ok(TameCharacter {
                    angle_pi: loc.rational(&c.angle_pi, &ground)?,
                    k: c.k,
                })
            })
            .transpose()
    };
    let mut endo = EndoscopicDatum {
        d_minus: ed.d_minus,
        d_plus: ed.d_plus,
        delta_minus: f_lit(&ed.delta_minus)?,
        delta_plus: f_lit(&ed.delta_plus)?,
        chi: f_lit(&ed.chi)?,
        mu_minus: character(&ed.mu_minus)?,
        mu_plus: character(&ed.mu_plus)?,
        cocycle: CocycleClass::Trivial,
    };

    let mut indices = Vec::new();
    for ix in &doc.indices {
        let side = match ix.side.as_str() {
            "minus" => Side::Minus,
            "plus" => Side::Plus,
            s => return Err(Error::Invalid(format!("index {}: side '{s}' is neither minus nor plus", ix.id))),
        };
        let tname = ix.tower.as_deref().unwrap_or("F");
        let tower = towers
            .get(tname)
            .ok_or_else(|| Error::Invalid(format!("index {}: unknown tower '{tname}'", ix.id)))?;
        let alg = match (&e, case.is_unitary_type(), ix.delta.as_deref()) {
            (Some(e), true, None) => QuadraticEtale::tensor_with(tower, e)?,
            (_, true, Some(_)) => {
                return Err(Error::Invalid(format!("index {}: F_i is F_{{±i}} ⊗ E, omit delta", ix.id)))
            }
            (_, false, Some("split")) => QuadraticEtale::split(tower),
            (_, false, Some(d)) => QuadraticEtale::new(tower, loc.field(d, tower)?)?,
            (_, _, None) => return Err(Error::Invalid(format!("index {}: delta is required", ix.id))),
        };
        let lit = |s: &Option<String>| s.as_ref().map(|s| loc.etale(s, &alg)).transpose();
        indices.push(IndexParam {
            id: ix.id.clone(),
            side,
            y: loc.etale(&ix.y, &alg)?,
            x: lit(&ix.x)?,
            c: lit(&ix.c)?,
            c_endo: lit(&ix.c_endo)?,
            alg,
        });
    }
    let param = RegularParam {
        indices,
        x_d: f_lit(&doc.x_d)?,
    };

    endo.cocycle = match ed.cocycle.as_deref() {
        Some("trivial") => CocycleClass::Trivial,
        Some("nontrivial") => CocycleClass::Nontrivial,
        Some(other) => return Err(Error::Invalid(format!("cocycle '{other}' is neither trivial nor nontrivial"))),
        None => CocycleClass::Trivial,
    };
    let mut inst = Instance { group, endo, param };
    if ed.cocycle.is_none() && matches!(case, GroupCase::SoOdd | GroupCase::SoEven) {
        if let Ok(c) = crate::factor::orthogonal_cocycle_class(&inst) {
            inst.endo.cocycle = c;
        }
    }
    Ok(inst)
}

fn q_strings(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

/// The document describing `inst`; parsing it back gives the same instance.
pub fn to_document(inst: &Instance) -> InstanceDocument {
    let g = &inst.group;
    let b = g.ground.base;
    let mut towers: Vec<(String, Arc<ExtensionTower>)> = Vec::new();
    let mut tower_name = |t: &Arc<ExtensionTower>| -> Option<String> {
        if t.is_trivial() {
            return None;
        }
        if let Some((n, _)) = towers.iter().find(|(_, u)| ExtensionTower::same(t, u)) {
            return Some(n.clone());
        }
        let n = format!("K{}", towers.len() + 1);
        towers.push((n.clone(), t.clone()));
        Some(n)
    };
    let indices = inst
        .param
        .indices
        .iter()
        .map(|ip| IndexSpec {
            id: ip.id.clone(),
            side: ip.side.name().into(),
            tower: tower_name(ip.base()),
            delta: if g.case.is_unitary_type() {
                None
            } else if ip.alg.is_field() {
                Some(ip.alg.delta().to_string())
            } else {
                Some("split".into())
            },
            y: ip.y.to_string(),
            x: ip.x.as_ref().map(ToString::to_string),
            c: ip.c.as_ref().map(ToString::to_string),
            c_endo: ip.c_endo.as_ref().map(ToString::to_string),
        })
        .collect();
    let character = |c: &Option<TameCharacter>| {
        c.as_ref().map(|c| CharacterSpec {
            angle_pi: fmt_q(&c.angle_pi),
            k: c.k,
        })
    };
    let e = &inst.endo;
    InstanceDocument {
        base: BaseSpec {
            p: b.p(),
            real: b.is_real(),
            precision: b.p().map(|_| b.precision),
        },
        towers: towers
            .into_iter()
            .map(|(n, t)| {
                (
                    n,
                    TowerSpec {
                        f: t.f,
                        modulus: Some(q_strings(t.modulus())),
                        eisenstein: t.eisenstein().iter().map(|c| Coefficient::Unramified(q_strings(c))).collect(),
                    },
                )
            })
            .collect(),
        group: GroupSpec {
            case: g.case.name().into(),
            d: g.d,
            delta: g.delta.as_ref().map(ToString::to_string),
            e: g.e.as_ref().map(|e| e.delta().to_string()),
            nu: g.nu.as_ref().map(ToString::to_string),
            eta: g.eta.to_string(),
        },
        endoscopic: EndoscopicSpec {
            d_minus: e.d_minus,
            d_plus: e.d_plus,
            delta_minus: e.delta_minus.as_ref().map(ToString::to_string),
            delta_plus: e.delta_plus.as_ref().map(ToString::to_string),
            chi: e.chi.as_ref().map(ToString::to_string),
            mu_minus: character(&e.mu_minus),
            mu_plus: character(&e.mu_plus),
            cocycle: Some(
                match e.cocycle {
                    CocycleClass::Trivial => "trivial",
                    CocycleClass::Nontrivial => "nontrivial",
                }
                .into(),
            ),
        },
        indices,
        x_d: inst.param.x_d.as_ref().map(ToString::to_string),
    }
}

/// Pretty JSON for an instance.
pub fn to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(&to_document(inst)).expect("documents serialize")
}
