//! Groups with canonical element forms: the integers, the cyclic groups
//! `Z_m`, and restricted wreath products `G wr H` of these.
//!
//! A [`Group`] is the tag that interprets an [`Element`] payload. All
//! operations check membership first and report [`GroupError::Mismatch`] for
//! payloads that do not belong to the group.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::support::FinSupportedMap;
use crate::vertex::{VertexId, WreathVertex};

mod cayley;

pub use cayley::CayleyGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("element {element} is not in group {group}")]
    Mismatch { group: String, element: String },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("inverse of {0} failed to multiply back to the identity")]
    InverseCertification(String),
}

/// Group description. Serialized as `{"group":"Z"}`,
/// `{"group":"Zm","m":2}` or `{"group":"wreath","left":..,"right":..}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "group")]
pub enum Group {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "Zm")]
    Cyclic { m: u64 },
    #[serde(rename = "wreath")]
    Wreath { left: Box<Group>, right: Box<Group> },
}

/// Canonical element payload. Integers serve `Z` and `Z_m` (residues in
/// `0..m`); wreath elements are a finitely supported map `H -> G` (entries
/// equal to the identity of `G` omitted) and a position in `H`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Int(i64),
    Lamps(Box<LampElement>),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LampElement {
    pub support: FinSupportedMap<Element, Element>,
    pub pos: Element,
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(i) => write!(f, "{i}"),
            Element::Lamps(l) => write!(f, "({:?}, {:?})", l.support, l.pos),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Integers => write!(f, "Z"),
            Group::Cyclic { m } => write!(f, "Z_{m}"),
            Group::Wreath { left, right } => write!(f, "({left} wr {right})"),
        }
    }
}

impl Element {
    pub fn lamps(support: FinSupportedMap<Element, Element>, pos: Element) -> Self {
        Element::Lamps(Box::new(LampElement { support, pos }))
    }

    /// Canonical vertex identification used by Cayley graphs.
    pub fn to_vertex(&self) -> VertexId {
        match self {
            Element::Int(i) => VertexId::Int(*i),
            Element::Lamps(l) => VertexId::Wreath(Box::new(WreathVertex {
                f: FinSupportedMap::from_canonical(
                    l.support.iter().map(|(k, v)| (k.to_vertex(), v.to_vertex())).collect(),
                ),
                v: l.pos.to_vertex(),
            })),
        }
    }

    pub fn from_vertex(v: &VertexId) -> Option<Self> {
        match v {
            VertexId::Int(i) => Some(Element::Int(*i)),
            VertexId::Wreath(w) => {
                let mut entries = Vec::with_capacity(w.f.len());
                for (k, s) in w.f.iter() {
                    entries.push((Element::from_vertex(k)?, Element::from_vertex(s)?));
                }
                Some(Element::lamps(
                    FinSupportedMap::from_canonical(entries),
                    Element::from_vertex(&w.v)?,
                ))
            }
            VertexId::Board(_) => None,
        }
    }
}

impl Group {
    pub fn wreath(left: Group, right: Group) -> Self {
        Group::Wreath { left: Box::new(left), right: Box::new(right) }
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        match self {
            Group::Integers => Ok(()),
            Group::Cyclic { m } if *m >= 1 && *m <= i64::MAX as u64 => Ok(()),
            Group::Cyclic { m } => Err(GroupError::InvalidGroup(format!("Z_m needs m >= 1, got {m}"))),
            Group::Wreath { left, right } => {
                left.validate()?;
                right.validate()
            }
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        match (self, x) {
            (Group::Integers, Element::Int(_)) => true,
            (Group::Cyclic { m }, Element::Int(r)) => *r >= 0 && (*r as u64) < *m,
            (Group::Wreath { left, right }, Element::Lamps(l)) => {
                let e = left.identity();
                right.contains(&l.pos)
                    && l.support.is_canonical_for(&e)
                    && l.support.iter().all(|(k, v)| right.contains(k) && left.contains(v))
            }
            _ => false,
        }
    }

    fn check(&self, x: &Element) -> Result<(), GroupError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(GroupError::Mismatch { group: self.to_string(), element: format!("{x:?}") })
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Group::Integers | Group::Cyclic { .. } => Element::Int(0),
            Group::Wreath { right, .. } => Element::lamps(FinSupportedMap::new(), right.identity()),
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub fn inverse(&self, a: &Element) -> Result<Element, GroupError> {
        self.check(a)?;
        let inv = self.inv_unchecked(a);
        if let Group::Wreath { .. } = self {
            if self.mul_unchecked(a, &inv) != self.identity() {
                return Err(GroupError::InverseCertification(format!("{a:?}")));
            }
        }
        Ok(inv)
    }

    /// Product in `G wr H`:
    /// `((g_h), h1) * ((g'_h), h2) = ((g_h * g'_{h1^-1 h}), h1 h2)`.
    pub fn wreath_multiply(&self, x: &Element, y: &Element) -> Result<Element, GroupError> {
        match self {
            Group::Wreath { .. } => self.multiply(x, y),
            _ => Err(GroupError::Mismatch {
                group: self.to_string(),
                element: "wreath product expected".into(),
            }),
        }
    }

    /// `iota_G(g)`: the lamp at the identity of `H` set to `g`, position `e_H`.
    pub fn embed_left(&self, g: &Element) -> Result<Element, GroupError> {
        let Group::Wreath { left, right } = self else {
            return Err(GroupError::InvalidGroup(format!("{self} is not a wreath product")));
        };
        left.check(g)?;
        let e_h = right.identity();
        let support = FinSupportedMap::from_entries([(e_h.clone(), g.clone())], &left.identity());
        Ok(Element::lamps(support, e_h))
    }

    /// `iota_H(h)`: all lamps at the identity of `G`, position `h`.
    pub fn embed_right(&self, h: &Element) -> Result<Element, GroupError> {
        let Group::Wreath { right, .. } = self else {
            return Err(GroupError::InvalidGroup(format!("{self} is not a wreath product")));
        };
        right.check(h)?;
        Ok(Element::lamps(FinSupportedMap::new(), h.clone()))
    }

    fn mul_unchecked(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (Group::Integers, Element::Int(x), Element::Int(y)) => Element::Int(x + y),
            (Group::Cyclic { m }, Element::Int(x), Element::Int(y)) => {
                Element::Int(((*x as i128 + *y as i128) % *m as i128) as i64)
            }
            (Group::Wreath { left, right }, Element::Lamps(x), Element::Lamps(y)) => {
                let e_g = left.identity();
                let h1 = &x.pos;
                let h1_inv = right.inv_unchecked(h1);
                // keys where the product can be non-identity: supp(x) and h1 * supp(y)
                let mut keys: Vec<Element> = x.support.keys().cloned().collect();
                keys.extend(y.support.keys().map(|k| right.mul_unchecked(h1, k)));
                keys.sort();
                keys.dedup();
                let entries = keys.into_iter().map(|h| {
                    let shifted = right.mul_unchecked(&h1_inv, &h);
                    let g = left.mul_unchecked(
                        x.support.get_or(&h, &e_g),
                        y.support.get_or(&shifted, &e_g),
                    );
                    (h, g)
                });
                let support = FinSupportedMap::from_entries(entries, &e_g);
                Element::lamps(support, right.mul_unchecked(h1, &y.pos))
            }
            _ => unreachable!("membership checked by caller"),
        }
    }

    /// `(f, h)^-1 = (f', h^-1)` with `f'(k) = f(h k)^-1`.
    fn inv_unchecked(&self, a: &Element) -> Element {
        match (self, a) {
            (Group::Integers, Element::Int(x)) => Element::Int(-x),
            (Group::Cyclic { m }, Element::Int(x)) => {
                Element::Int(((*m as i128 - *x as i128) % *m as i128) as i64)
            }
            (Group::Wreath { left, right }, Element::Lamps(x)) => {
                let h_inv = right.inv_unchecked(&x.pos);
                let support = x.support.map_entries(&left.identity(), |j, g| {
                    (right.mul_unchecked(&h_inv, j), left.inv_unchecked(g))
                });
                Element::lamps(support, h_inv)
            }
            _ => unreachable!("membership checked by caller"),
        }
    }

    /// Parses an element from its JSON form and checks membership.
    pub fn parse_element(&self, value: &serde_json::Value) -> Result<Element, GroupError> {
        let x: Element = serde_json::from_value(value.clone()).map_err(|e| GroupError::Mismatch {
            group: self.to_string(),
            element: e.to_string(),
        })?;
        self.check(&x)?;
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z2_wr_z() -> Group {
        Group::wreath(Group::Cyclic { m: 2 }, Group::Integers)
    }

    fn int(i: i64) -> Element {
        Element::Int(i)
    }

    #[test]
    fn basic_operations() {
        assert_eq!(Group::Integers.multiply(&int(2), &int(3)).unwrap(), int(5));
        assert_eq!(Group::Cyclic { m: 2 }.multiply(&int(1), &int(1)).unwrap(), int(0));
        assert_eq!(Group::Integers.inverse(&int(4)).unwrap(), int(-4));
        assert_eq!(Group::Cyclic { m: 5 }.inverse(&int(2)).unwrap(), int(3));
    }

    #[test]
    fn mismatch_is_reported() {
        assert!(matches!(
            Group::Cyclic { m: 2 }.multiply(&int(2), &int(0)),
            Err(GroupError::Mismatch { .. })
        ));
        let g = z2_wr_z();
        assert!(g.multiply(&int(1), &g.identity()).is_err());
        assert!(Group::Integers.wreath_multiply(&int(1), &int(1)).is_err());
    }

    #[test]
    fn embeddings() {
        let g = z2_wr_z();
        assert_eq!(g.embed_left(&int(0)).unwrap(), g.identity());
        assert_eq!(g.embed_right(&int(5)).unwrap(), Element::lamps(FinSupportedMap::new(), int(5)));
        assert_eq!(
            g.embed_left(&int(1)).unwrap(),
            Element::lamps(FinSupportedMap::from_entries([(int(0), int(1))], &int(0)), int(0))
        );
    }

    #[test]
    fn wreath_products_of_generators() {
        let g = z2_wr_z();
        let t = g.embed_right(&int(1)).unwrap();
        let s = g.embed_left(&int(1)).unwrap();
        assert_eq!(
            g.wreath_multiply(&t, &s).unwrap(),
            Element::lamps(FinSupportedMap::from_entries([(int(1), int(1))], &int(0)), int(1))
        );
        assert_eq!(g.wreath_multiply(&s, &s).unwrap(), g.identity());
        let x = g.wreath_multiply(&t, &s).unwrap();
        assert_eq!(g.wreath_multiply(&g.identity(), &x).unwrap(), x);
    }

    #[test]
    fn element_text_form() {
        let g = z2_wr_z();
        let x = g.wreath_multiply(&g.embed_right(&int(1)).unwrap(), &g.embed_left(&int(1)).unwrap()).unwrap();
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"support":[[1,1]],"pos":1}"#);
        assert_eq!(g.parse_element(&serde_json::from_str(&json).unwrap()).unwrap(), x);
        assert!(g.parse_element(&serde_json::json!({"support":[[1,0]],"pos":1})).is_err());
        let spec: Group = serde_json::from_str(r#"{"group":"wreath","left":{"group":"Zm","m":2},"right":{"group":"Z"}}"#).unwrap();
        assert_eq!(spec, g);
    }

    /// Random element of `Z_m wr Z` with support inside `-3..3`.
    fn arb_lamp(m: i64) -> impl Strategy<Value = Element> {
        (prop::collection::vec((-3i64..3, 0..m), 0..6), -4i64..4).prop_map(|(pairs, pos)| {
            Element::lamps(
                FinSupportedMap::from_entries(pairs.into_iter().map(|(k, v)| (int(k), int(v))), &int(0)),
                int(pos),
            )
        })
    }

    proptest! {
        #[test]
        fn associativity(m in 2i64..4, a in arb_lamp(3), b in arb_lamp(3), c in arb_lamp(3)) {
            let g = Group::wreath(Group::Cyclic { m: m as u64 }, Group::Integers);
            // reduce the sampled residues into Z_m
            let fix = |x: Element| match x {
                Element::Lamps(l) => Element::lamps(l.support.map_entries(&int(0), |k, v| (k.clone(), int(v.clone().as_i64() % m))), l.pos.clone()),
                other => other,
            };
            let (a, b, c) = (fix(a), fix(b), fix(c));
            let ab_c = g.multiply(&g.multiply(&a, &b).unwrap(), &c).unwrap();
            let a_bc = g.multiply(&a, &g.multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
        }

        #[test]
        fn inverse_and_identity_laws(a in arb_lamp(2)) {
            let g = z2_wr_z();
            let e = g.identity();
            prop_assert_eq!(g.multiply(&e, &a).unwrap(), a.clone());
            prop_assert_eq!(g.multiply(&a, &e).unwrap(), a.clone());
            let inv = g.inverse(&a).unwrap();
            prop_assert_eq!(g.multiply(&a, &inv).unwrap(), e.clone());
            prop_assert_eq!(g.multiply(&inv, &a).unwrap(), e);
        }

        #[test]
        fn embeddings_are_homomorphisms(a in -5i64..5, b in -5i64..5, x in 0i64..3, y in 0i64..3) {
            let g = Group::wreath(Group::Cyclic { m: 3 }, Group::Integers);
            let h = Group::Integers;
            let l = Group::Cyclic { m: 3 };
            prop_assert_eq!(
                g.embed_right(&h.multiply(&int(a), &int(b)).unwrap()).unwrap(),
                g.multiply(&g.embed_right(&int(a)).unwrap(), &g.embed_right(&int(b)).unwrap()).unwrap()
            );
            prop_assert_eq!(
                g.embed_left(&l.multiply(&int(x), &int(y)).unwrap()).unwrap(),
                g.multiply(&g.embed_left(&int(x)).unwrap(), &g.embed_left(&int(y)).unwrap()).unwrap()
            );
        }

        #[test]
        fn vertex_identification_round_trips(a in arb_lamp(2)) {
            prop_assert_eq!(Element::from_vertex(&a.to_vertex()).unwrap(), a);
        }
    }

    impl Element {
        fn as_i64(self) -> i64 {
            match self {
                Element::Int(i) => i,
                _ => panic!("not an integer"),
            }
        }
    }
}
