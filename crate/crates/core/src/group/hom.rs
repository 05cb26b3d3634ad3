use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::quat::{self, Quat};
use super::{ElementKey, GroupDescriptor, GroupElement, GroupError, GroupKind, Value};

/// A group homomorphism.
///
/// Finite sources carry a full multiplication-compatible table built from
/// generator images. Matrix kinds use a small catalog: identity and complex
/// conjugation on U(1), conjugation by a fixed unit quaternion on SU(2).
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: GroupDescriptor,
    target: GroupDescriptor,
    rule: Rule,
    iso: bool,
}

#[derive(Clone, Debug)]
enum Rule {
    Table { images: Vec<GroupElement>, map: Arc<HashMap<ElementKey, GroupElement>> },
    U1 { conjugate: bool },
    Su2 { q: Quat },
}

/// Serializable description of a homomorphism rule.
#[derive(Clone, Debug, PartialEq)]
pub enum HomTag {
    /// Images of the source's standard generators.
    Images(Vec<GroupElement>),
    U1Identity,
    U1Conjugation,
    /// `x -> q x q^-1`.
    Su2Conjugation(Quat),
}

impl GroupHom {
    /// Builds a homomorphism from images of the source's standard generators,
    /// checking every defining relation.
    pub fn from_generator_images(
        source: GroupDescriptor,
        target: GroupDescriptor,
        images: Vec<GroupElement>,
    ) -> Result<Self, GroupError> {
        if source.is_matrix() || target.is_matrix() {
            return Err(GroupError::BadRule(format!("generator tables need finite groups, got {source} -> {target}")));
        }
        let gens = source.generators();
        if images.len() != gens.len() {
            return Err(GroupError::BadRule(format!(
                "{} generator images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        for img in &images {
            target.check_same(img.group())?;
        }
        for (index, rel) in source.relations().iter().enumerate() {
            if !source.evaluate_word(&target, &images, rel).is_identity() {
                return Err(GroupError::RelationViolated { group: source.to_string(), index });
            }
        }
        let map = build_table(&source, &target, &gens, &images)?;
        let order = source.order().expect("finite");
        let iso = order == target.order().expect("finite") && {
            let mut seen: Vec<_> = map.values().filter_map(|v| v.key()).collect();
            seen.sort();
            seen.dedup();
            seen.len() as u64 == order
        };
        Ok(Self { source, target, rule: Rule::Table { images, map: Arc::new(map) }, iso })
    }

    pub fn identity(group: &GroupDescriptor) -> Self {
        match group.kind() {
            GroupKind::U1 => Self::u1(*group, false),
            GroupKind::Su2 => Self::su2_conjugation(*group, quat::ONE),
            _ => Self::from_generator_images(*group, *group, group.generators())
                .expect("standard generators satisfy their own relations"),
        }
    }

    /// Complex conjugation on U(1).
    pub fn u1_conjugation(group: &GroupDescriptor) -> Result<Self, GroupError> {
        if group.kind() != GroupKind::U1 {
            return Err(GroupError::BadRule(format!("complex conjugation on {group}")));
        }
        Ok(Self::u1(*group, true))
    }

    fn u1(group: GroupDescriptor, conjugate: bool) -> Self {
        Self { source: group, target: group, rule: Rule::U1 { conjugate }, iso: true }
    }

    /// `x -> q x q^-1` on SU(2).
    pub fn su2_conjugation(group: GroupDescriptor, q: Quat) -> Self {
        let q = quat::normalize(&q).unwrap_or(quat::ONE);
        Self { source: group, target: group, rule: Rule::Su2 { q }, iso: true }
    }

    /// Inner automorphism `x -> c x c^-1`.
    pub fn conjugation(c: &GroupElement) -> Self {
        let g = *c.group();
        match (g.kind(), c.value()) {
            (GroupKind::U1, _) => Self::u1(g, false),
            (GroupKind::Su2, Value::Quat(q)) => Self::su2_conjugation(g, *q),
            _ => {
                let images = g.generators().iter().map(|s| s.conjugated_by(c)).collect();
                Self::from_generator_images(g, g, images).expect("inner automorphisms are homomorphisms")
            }
        }
    }

    pub fn from_tag(source: GroupDescriptor, target: GroupDescriptor, tag: HomTag) -> Result<Self, GroupError> {
        match tag {
            HomTag::Images(images) => Self::from_generator_images(source, target, images),
            HomTag::U1Identity | HomTag::U1Conjugation => {
                source.check_same(&target)?;
                if source.kind() != GroupKind::U1 {
                    return Err(GroupError::BadRule(format!("U1 catalog entry on {source}")));
                }
                Ok(Self::u1(source, tag == HomTag::U1Conjugation))
            }
            HomTag::Su2Conjugation(q) => {
                source.check_same(&target)?;
                if source.kind() != GroupKind::Su2 {
                    return Err(GroupError::BadRule(format!("SU2 catalog entry on {source}")));
                }
                if quat::normalize(&q).is_none() {
                    return Err(GroupError::BadRule("zero quaternion".into()));
                }
                Ok(Self::su2_conjugation(source, q))
            }
        }
    }

    pub fn tag(&self) -> HomTag {
        match &self.rule {
            Rule::Table { images, .. } => HomTag::Images(images.clone()),
            Rule::U1 { conjugate: false } => HomTag::U1Identity,
            Rule::U1 { conjugate: true } => HomTag::U1Conjugation,
            Rule::Su2 { q } => HomTag::Su2Conjugation(*q),
        }
    }

    pub fn source(&self) -> &GroupDescriptor {
        &self.source
    }

    pub fn target(&self) -> &GroupDescriptor {
        &self.target
    }

    pub fn is_iso(&self) -> bool {
        self.iso
    }

    pub fn try_apply(&self, x: &GroupElement) -> Result<GroupElement, GroupError> {
        self.source.check_same(x.group())?;
        Ok(match (&self.rule, x.value()) {
            (Rule::Table { map, .. }, _) => {
                let key = x.key().expect("finite element");
                map.get(&key).cloned().ok_or_else(|| GroupError::BadRule("element missing from table".into()))?
            }
            (Rule::U1 { conjugate }, _) => {
                if *conjugate {
                    x.inverse()
                } else {
                    x.clone()
                }
            }
            (Rule::Su2 { q }, Value::Quat(v)) => {
                let p = quat::mul(&quat::mul(q, v), &quat::conj(q));
                self.target.quaternion(p)?
            }
            _ => unreachable!("descriptor check guarantees matching payloads"),
        })
    }

    /// Applies the homomorphism; panics if `x` is not in the source group.
    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        self.try_apply(x).expect("element outside homomorphism source")
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom, GroupError> {
        first.target.check_same(&self.source)?;
        let iso = self.iso && first.iso;
        let rule = match (&first.rule, &self.rule) {
            (Rule::Table { images, map }, _) => {
                let images: Vec<_> = images.iter().map(|x| self.apply(x)).collect();
                let map: HashMap<_, _> = map.iter().map(|(k, v)| (k.clone(), self.apply(v))).collect();
                Rule::Table { images, map: Arc::new(map) }
            }
            (Rule::U1 { conjugate: a }, Rule::U1 { conjugate: b }) => Rule::U1 { conjugate: a ^ b },
            (Rule::Su2 { q: a }, Rule::Su2 { q: b }) => {
                Rule::Su2 { q: quat::normalize(&quat::mul(b, a)).unwrap_or(quat::ONE) }
            }
            _ => return Err(GroupError::BadRule("cannot compose these rules".into())),
        };
        Ok(GroupHom { source: first.source, target: self.target, rule, iso })
    }

    pub fn inverse(&self) -> Result<GroupHom, GroupError> {
        if !self.iso {
            return Err(GroupError::NotInvertible);
        }
        match &self.rule {
            Rule::Table { map, .. } => {
                let back: HashMap<ElementKey, GroupElement> = map
                    .iter()
                    .map(|(k, v)| {
                        let x = self.source.element(key_value(k)).expect("table keys are valid");
                        (v.key().expect("finite"), x)
                    })
                    .collect();
                let images = self.target.generators().iter().map(|s| back[&s.key().expect("finite")].clone()).collect();
                Ok(GroupHom {
                    source: self.target,
                    target: self.source,
                    rule: Rule::Table { images, map: Arc::new(back) },
                    iso: true,
                })
            }
            Rule::U1 { conjugate } => Ok(Self::u1(self.source, *conjugate)),
            Rule::Su2 { q } => Ok(Self::su2_conjugation(self.source, quat::conj(q))),
        }
    }

    /// Pointwise equality (exact for tables, within tolerance for catalog rules).
    pub fn same_as(&self, other: &GroupHom) -> bool {
        if !self.source.same_group(&other.source) || !self.target.same_group(&other.target) {
            return false;
        }
        match (&self.rule, &other.rule) {
            (Rule::Table { map: a, .. }, Rule::Table { map: b, .. }) => {
                a.len() == b.len() && a.iter().all(|(k, v)| b.get(k).is_some_and(|w| v.approx_eq(w)))
            }
            (Rule::U1 { conjugate: a }, Rule::U1 { conjugate: b }) => a == b,
            (Rule::Su2 { q: a }, Rule::Su2 { q: b }) => {
                let tol = self.target.tolerance().max(1e-12);
                let neg = [-b[0], -b[1], -b[2], -b[3]];
                quat::distance(a, b) <= tol || quat::distance(a, &neg) <= tol
            }
            _ => false,
        }
    }

    /// Re-checks the defining relations on the stored generator images.
    pub fn respects_relations(&self) -> bool {
        match &self.rule {
            Rule::Table { images, .. } => self
                .source
                .relations()
                .iter()
                .all(|rel| self.source.evaluate_word(&self.target, images, rel).is_identity()),
            _ => true,
        }
    }
}

fn key_value(k: &ElementKey) -> Value {
    match k {
        ElementKey::Residue(r) => Value::Residue(*r),
        ElementKey::Perm(p) => Value::Perm(p.clone()),
        ElementKey::Dihedral { rot, reflect } => Value::Dihedral { rot: *rot, reflect: *reflect },
        ElementKey::Q8(i) => Value::Q8(*i),
    }
}

fn build_table(
    source: &GroupDescriptor,
    target: &GroupDescriptor,
    gens: &[GroupElement],
    images: &[GroupElement],
) -> Result<HashMap<ElementKey, GroupElement>, GroupError> {
    let mut map = HashMap::new();
    let e = source.identity();
    map.insert(e.key().expect("finite"), target.identity());
    let mut queue = VecDeque::from([(e, target.identity())]);
    while let Some((x, fx)) = queue.pop_front() {
        for (s, fs) in gens.iter().zip(images) {
            let y = &x * s;
            let fy = &fx * fs;
            match map.get(&y.key().expect("finite")) {
                Some(prev) if !prev.approx_eq(&fy) => {
                    return Err(GroupError::BadRule(format!("{y} has two images")));
                }
                Some(_) => {}
                None => {
                    map.insert(y.key().expect("finite"), fy.clone());
                    queue.push_back((y, fy));
                }
            }
        }
    }
    if map.len() as u64 != source.order().expect("finite") {
        return Err(GroupError::BadRule("standard generators do not reach every element".into()));
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn relation_violation_is_rejected() {
        let c4 = GroupDescriptor::cyclic(4).unwrap();
        let c3 = GroupDescriptor::cyclic(3).unwrap();
        let err = GroupHom::from_generator_images(c4, c3, vec![c3.residue(1).unwrap()]).unwrap_err();
        assert!(matches!(err, GroupError::RelationViolated { .. }));
    }

    #[test]
    fn inverse_undoes_automorphism() {
        let s4 = GroupDescriptor::symmetric(4).unwrap();
        let c = s4.cycles(&[&[0, 1, 2, 3]]).unwrap();
        let h = GroupHom::conjugation(&c);
        let id = h.inverse().unwrap().compose(&h).unwrap();
        assert!(id.same_as(&GroupHom::identity(&s4)));
    }

    #[test]
    fn non_injective_hom_is_not_iso() {
        let c4 = GroupDescriptor::cyclic(4).unwrap();
        let c2 = GroupDescriptor::cyclic(2).unwrap();
        let h = GroupHom::from_generator_images(c4, c2, vec![c2.residue(1).unwrap()]).unwrap();
        assert!(!h.is_iso());
        assert!(matches!(h.inverse(), Err(GroupError::NotInvertible)));
        assert_eq!(h.apply(&c4.residue(3).unwrap()), c2.residue(1).unwrap());
    }

    #[test]
    fn su2_conjugation_is_multiplicative() {
        let g = GroupDescriptor::su2();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = match g.random(&mut rng).value() {
            Value::Quat(q) => *q,
            _ => unreachable!(),
        };
        let h = GroupHom::su2_conjugation(g, q);
        for _ in 0..100 {
            let a = g.random(&mut rng);
            let b = g.random(&mut rng);
            assert!(h.apply(&(&a * &b)).approx_eq(&(&h.apply(&a) * &h.apply(&b))));
        }
    }

    #[test]
    fn tags_round_trip() {
        let d4 = GroupDescriptor::dihedral(4).unwrap();
        let h = GroupHom::conjugation(&d4.reflection(1).unwrap());
        let back = GroupHom::from_tag(d4, d4, h.tag()).unwrap();
        assert!(back.same_as(&h));
    }
}
