use std::collections::{HashSet, VecDeque};

use super::{ElementKey, GroupDescriptor, GroupElement, GroupError, Value};

/// Maximum number of elements enumerated by [`subgroup_generated`].
pub const SUBGROUP_CAP: usize = 1_000_000;

/// Word-length bound for matrix-kind membership search.
pub const MEMBERSHIP_DEPTH: usize = 16;

const MEMBERSHIP_BUDGET: usize = 200_000;

/// A subgroup: fully enumerated for finite kinds, a generator list for
/// matrix kinds.
#[derive(Clone, Debug)]
pub enum Subgroup {
    Finite { group: GroupDescriptor, gens: Vec<GroupElement>, elements: Vec<GroupElement>, keys: HashSet<ElementKey> },
    Generated { group: GroupDescriptor, gens: Vec<GroupElement> },
}

/// Closure of `gens` under product and inverse.
pub fn subgroup_generated(group: &GroupDescriptor, gens: &[GroupElement]) -> Result<Subgroup, GroupError> {
    for g in gens {
        group.check_same(g.group())?;
    }
    if group.is_matrix() {
        return Ok(Subgroup::Generated { group: *group, gens: gens.to_vec() });
    }
    let e = group.identity();
    let mut keys = HashSet::from([e.key().expect("finite")]);
    let mut elements = vec![e.clone()];
    let mut queue = VecDeque::from([e]);
    // in a finite group, closure under right multiplication by generators
    // already contains all inverses
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = &x * s;
            if keys.insert(y.key().expect("finite")) {
                if keys.len() > SUBGROUP_CAP {
                    return Err(GroupError::CapExceeded { cap: SUBGROUP_CAP });
                }
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    elements.sort_by_key(|x| x.key());
    Ok(Subgroup::Finite { group: *group, gens: gens.to_vec(), elements, keys })
}

/// True iff `c` commutes with every element of `gens`.
pub fn centralizes(c: &GroupElement, gens: &[GroupElement]) -> Result<bool, GroupError> {
    for g in gens {
        c.group().check_same(g.group())?;
    }
    Ok(gens.iter().all(|g| c.commutes_with(g)))
}

impl Subgroup {
    pub fn group(&self) -> &GroupDescriptor {
        match self {
            Subgroup::Finite { group, .. } | Subgroup::Generated { group, .. } => group,
        }
    }

    pub fn generators(&self) -> &[GroupElement] {
        match self {
            Subgroup::Finite { gens, .. } | Subgroup::Generated { gens, .. } => gens,
        }
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            Subgroup::Finite { elements, .. } => Some(elements.len()),
            Subgroup::Generated { .. } => None,
        }
    }

    pub fn elements(&self) -> Result<&[GroupElement], GroupError> {
        match self {
            Subgroup::Finite { elements, .. } => Ok(elements),
            Subgroup::Generated { group, .. } => Err(GroupError::NotEnumerable(group.to_string())),
        }
    }

    /// Membership. Matrix kinds search words of length at most
    /// [`MEMBERSHIP_DEPTH`] in the generators and their inverses, so a
    /// `false` there means "not found within the bound".
    pub fn contains(&self, x: &GroupElement) -> bool {
        match self {
            Subgroup::Finite { group, keys, .. } => {
                group.same_group(x.group()) && x.key().is_some_and(|k| keys.contains(&k))
            }
            Subgroup::Generated { group, gens } => {
                group.same_group(x.group()) && word_search(group, gens, x, MEMBERSHIP_DEPTH).is_some()
            }
        }
    }
}

/// Breadth-first search for a word in `gens ∪ gens⁻¹` evaluating to `target`.
/// Returns the word as `(generator index, ±1)` letters, multiplied left to right.
pub(crate) fn word_search(
    group: &GroupDescriptor,
    gens: &[GroupElement],
    target: &GroupElement,
    depth: usize,
) -> Option<Vec<(usize, i32)>> {
    let letters: Vec<(usize, i32, GroupElement)> =
        gens.iter().enumerate().flat_map(|(i, g)| [(i, 1, g.clone()), (i, -1, g.inverse())]).collect();
    let mut frontier = vec![(group.identity(), Vec::new())];
    let mut seen: HashSet<Vec<i64>> = HashSet::from([cell(group, &group.identity())]);
    let mut budget = MEMBERSHIP_BUDGET;
    for _ in 0..=depth {
        if let Some((_, w)) = frontier.iter().find(|(x, _)| x.approx_eq(target)) {
            return Some(w.clone());
        }
        let mut next = Vec::new();
        for (x, w) in &frontier {
            for (i, e, g) in &letters {
                if budget == 0 {
                    return None;
                }
                budget -= 1;
                let y = x * g;
                if group.is_finite() || seen.insert(cell(group, &y)) {
                    let mut w = w.clone();
                    w.push((*i, *e));
                    next.push((y, w));
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

/// Grid cell of a matrix element at the group tolerance. Elements closer
/// than the tolerance may still land in neighbouring cells, which only costs
/// pruning.
fn cell(group: &GroupDescriptor, x: &GroupElement) -> Vec<i64> {
    let q = |v: f64| (v / group.tolerance()).round() as i64;
    match x.value() {
        Value::Angle(a) => vec![q(*a)],
        Value::Quat(c) => c.iter().map(|v| q(*v)).collect(),
        _ => Vec::new(),
    }
}
