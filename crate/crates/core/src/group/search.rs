use std::collections::BTreeMap;

use super::{GroupDescriptor, GroupElement, GroupError, GroupHom, GroupKind};

/// Default order bound for finite isomorphism search.
pub const DEFAULT_MAX_SEARCH_ORDER: u64 = 64;

/// All isomorphisms `src -> dst` (finite kinds up to order 64, catalog for
/// matrix kinds), in a deterministic order.
pub fn isomorphism_search(src: &GroupDescriptor, dst: &GroupDescriptor) -> Result<Vec<GroupHom>, GroupError> {
    isomorphism_search_bounded(src, dst, DEFAULT_MAX_SEARCH_ORDER)
}

pub fn isomorphism_search_bounded(
    src: &GroupDescriptor,
    dst: &GroupDescriptor,
    max_order: u64,
) -> Result<Vec<GroupHom>, GroupError> {
    match (src.kind(), dst.kind()) {
        (GroupKind::U1, GroupKind::U1) => {
            return Ok(vec![GroupHom::identity(src), GroupHom::u1_conjugation(src)?]);
        }
        (GroupKind::Su2, GroupKind::Su2) => return Ok(vec![GroupHom::identity(src)]),
        _ if src.is_matrix() || dst.is_matrix() => return Ok(Vec::new()),
        _ => {}
    }
    let (n, m) = (src.order().expect("finite"), dst.order().expect("finite"));
    for order in [n, m] {
        if order > max_order {
            return Err(GroupError::OrderBound { order, bound: max_order });
        }
    }
    if n != m {
        return Ok(Vec::new());
    }
    let dst_elements = dst.elements()?;
    if order_census(&src.elements()?) != order_census(&dst_elements) {
        return Ok(Vec::new());
    }
    let gens = src.generators();
    let candidates: Vec<Vec<GroupElement>> = gens
        .iter()
        .map(|g| {
            let k = g.order();
            dst_elements.iter().filter(|y| y.order() == k).cloned().collect()
        })
        .collect();
    let relations = src.relations();
    let mut found = Vec::new();
    let mut chosen = Vec::with_capacity(gens.len());
    backtrack(src, dst, &candidates, &relations, &mut chosen, &mut found);
    Ok(found)
}

fn order_census(elements: &[GroupElement]) -> BTreeMap<u64, usize> {
    let mut census = BTreeMap::new();
    for x in elements {
        *census.entry(x.order().expect("finite")).or_insert(0) += 1;
    }
    census
}

fn backtrack(
    src: &GroupDescriptor,
    dst: &GroupDescriptor,
    candidates: &[Vec<GroupElement>],
    relations: &[super::Relation],
    chosen: &mut Vec<GroupElement>,
    found: &mut Vec<GroupHom>,
) {
    let level = chosen.len();
    if level == candidates.len() {
        if let Ok(h) = GroupHom::from_generator_images(*src, *dst, chosen.clone()) {
            if h.is_iso() {
                found.push(h);
            }
        }
        return;
    }
    for y in &candidates[level] {
        chosen.push(y.clone());
        // relations whose generators are all assigned can be checked now
        let ok = relations
            .iter()
            .filter(|rel| rel.iter().all(|&(g, _)| g <= level))
            .all(|rel| src.evaluate_word(dst, chosen, rel).is_identity());
        if ok {
            backtrack(src, dst, candidates, relations, chosen, found);
        }
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_four_has_two_automorphisms() {
        let c4 = GroupDescriptor::cyclic(4).unwrap();
        let isos = isomorphism_search(&c4, &c4).unwrap();
        let images: Vec<_> = isos.iter().map(|h| h.apply(&c4.residue(1).unwrap()).to_string()).collect();
        assert_eq!(images, ["1", "3"]);
    }

    #[test]
    fn cyclic_four_is_not_klein_four() {
        let c4 = GroupDescriptor::cyclic(4).unwrap();
        let v4 = GroupDescriptor::dihedral(2).unwrap();
        assert!(isomorphism_search(&c4, &v4).unwrap().is_empty());
    }

    #[test]
    fn automorphism_counts() {
        // |Aut(S4)| = 24, |Aut(D4)| = 8, |Aut(Q8)| = 24, |Aut(C6)| = 2
        let cases = [
            (GroupDescriptor::symmetric(4).unwrap(), 24),
            (GroupDescriptor::dihedral(4).unwrap(), 8),
            (GroupDescriptor::quaternion8(), 24),
            (GroupDescriptor::cyclic(6).unwrap(), 2),
        ];
        for (g, n) in cases {
            assert_eq!(isomorphism_search(&g, &g).unwrap().len(), n, "{g}");
        }
    }

    #[test]
    fn cross_kind_isomorphism() {
        // S3 and D3 are isomorphic
        let s3 = GroupDescriptor::symmetric(3).unwrap();
        let d3 = GroupDescriptor::dihedral(3).unwrap();
        assert_eq!(isomorphism_search(&s3, &d3).unwrap().len(), 6);
    }

    #[test]
    fn order_bound() {
        let s5 = GroupDescriptor::symmetric(5).unwrap();
        assert!(matches!(isomorphism_search(&s5, &s5), Err(GroupError::OrderBound { .. })));
    }

    #[test]
    fn u1_catalog() {
        let u = GroupDescriptor::u1();
        assert_eq!(isomorphism_search(&u, &u).unwrap().len(), 2);
    }
}
