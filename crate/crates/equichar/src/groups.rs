//! Finite groups as Cayley tables, homomorphisms, right G-sets, and the
//! coset combinatorics behind induction, quotients, and double cosets.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("Cayley table is not square: row {row} has length {len}, expected {order}")]
    TableNotSquare { row: usize, len: usize, order: usize },
    #[error("Cayley table entry out of range at ({row}, {col}): {value} >= {order}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, order: usize },
    #[error("not a Latin square: value {value} repeats in {axis} {index}")]
    NotLatinSquare { axis: &'static str, index: usize, value: usize },
    #[error("no two-sided identity element")]
    MissingIdentity,
    #[error("element {element} has no inverse")]
    MissingInverse { element: usize },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("map is not a homomorphism: f({a}*{b}) != f({a})*f({b})")]
    NotHomomorphism { a: usize, b: usize },
    #[error("homomorphism is not injective: {a} and {b} share an image")]
    NotInjective { a: usize, b: usize },
    #[error("homomorphism is not surjective: {missing} is not hit")]
    NotSurjective { missing: usize },
    #[error("element set is not a subgroup (fails closure or inverses)")]
    NotSubgroup,
    #[error("point {point} out of range for a set of size {size}")]
    PointOutOfRange { point: usize, size: usize },
    #[error("not a right action: axiom fails at point {point}, elements {g}, {h}")]
    NotAction { point: usize, g: usize, h: usize },
    #[error("map is not equivariant at point {point}, element {g}")]
    NotEquivariant { point: usize, g: usize },
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
}

/// A finite group presented by its full Cayley table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validate a multiplication table, reporting the first violated axiom.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<FiniteGroup, GroupError> {
        let order = table.len();
        for (row, r) in table.iter().enumerate() {
            if r.len() != order {
                return Err(GroupError::TableNotSquare { row, len: r.len(), order });
            }
            for (col, &v) in r.iter().enumerate() {
                if v >= order {
                    return Err(GroupError::EntryOutOfRange { row, col, value: v, order });
                }
            }
        }
        // Latin square
        for i in 0..order {
            let mut seen_row = vec![false; order];
            let mut seen_col = vec![false; order];
            for j in 0..order {
                let rv = table[i][j];
                if seen_row[rv] {
                    return Err(GroupError::NotLatinSquare { axis: "row", index: i, value: rv });
                }
                seen_row[rv] = true;
                let cv = table[j][i];
                if seen_col[cv] {
                    return Err(GroupError::NotLatinSquare { axis: "column", index: i, value: cv });
                }
                seen_col[cv] = true;
            }
        }
        // identity
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or(GroupError::MissingIdentity)?;
        // inverses
        let mut inverse = vec![0usize; order];
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or(GroupError::MissingInverse { element: a })?;
            inverse[a] = inv;
        }
        // associativity
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(FiniteGroup { order, table, identity, inverse })
    }

    /// Closure of permutations of {0..degree-1} under composition;
    /// elements are indexed in sorted (lexicographic) order.
    pub fn from_permutations(
        degree: usize,
        generators: &[Vec<usize>],
    ) -> Result<FiniteGroup, GroupError> {
        for g in generators {
            if g.len() != degree {
                return Err(GroupError::SizeMismatch { expected: degree, got: g.len() });
            }
            let mut seen = vec![false; degree];
            for &v in g {
                if v >= degree {
                    return Err(GroupError::EntryOutOfRange {
                        row: 0,
                        col: 0,
                        value: v,
                        order: degree,
                    });
                }
                if seen[v] {
                    return Err(GroupError::NotLatinSquare { axis: "row", index: 0, value: v });
                }
                seen[v] = true;
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elements: BTreeSet<Vec<usize>> = BTreeSet::new();
        elements.insert(id);
        loop {
            let mut new_elems: Vec<Vec<usize>> = Vec::new();
            for e in &elements {
                for g in generators {
                    // right-to-left composition: (e then g)
                    let prod: Vec<usize> = (0..degree).map(|i| g[e[i]]).collect();
                    if !elements.contains(&prod) {
                        new_elems.push(prod);
                    }
                }
            }
            if new_elems.is_empty() {
                break;
            }
            elements.extend(new_elems);
        }
        let elems: Vec<Vec<usize>> = elements.into_iter().collect();
        let index: BTreeMap<&Vec<usize>, usize> =
            elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let order = elems.len();
        let mut table = vec![vec![0usize; order]; order];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                // product a*b acts as "first a, then b" on points
                let prod: Vec<usize> = (0..degree).map(|p| b[a[p]]).collect();
                table[i][j] = index[&prod];
            }
        }
        FiniteGroup::from_table(table)
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::from_table(vec![vec![0]]).unwrap()
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroup::from_table(table).unwrap()
    }

    pub fn symmetric(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        if n == 1 {
            return FiniteGroup::trivial();
        }
        let mut transposition: Vec<usize> = (0..n).collect();
        transposition.swap(0, 1);
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        FiniteGroup::from_permutations(n, &[transposition, cycle]).unwrap()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn conjugate(&self, g: usize, by: usize) -> usize {
        self.mul(self.mul(by, g), self.inv(by))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1usize;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Smallest subgroup containing the generators, as a sorted element list.
    pub fn subgroup_generated(&self, generators: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::new();
        set.insert(self.identity);
        let mut frontier: Vec<usize> = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                for y in [self.mul(x, g), self.mul(x, self.inv(g))] {
                    if set.insert(y) {
                        frontier.push(y);
                    }
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        if !set.contains(&self.identity) {
            return false;
        }
        set.iter().all(|&a| {
            set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b)))
        })
    }

    /// All subgroups, each a sorted element list, listed in a deterministic
    /// order. Intended for small groups (order <= ~30).
    pub fn all_subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(vec![self.identity]);
        loop {
            let mut grew = false;
            let snapshot: Vec<Vec<usize>> = found.iter().cloned().collect();
            for sub in &snapshot {
                for g in self.elements() {
                    if sub.binary_search(&g).is_ok() {
                        continue;
                    }
                    let mut gens = sub.clone();
                    gens.push(g);
                    let bigger = self.subgroup_generated(&gens);
                    if found.insert(bigger) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by_key(|s| (s.len(), s.clone()));
        out
    }

    /// Right cosets S\G of a subgroup: for each coset its least
    /// representative, in increasing order.
    pub fn right_coset_reps(&self, sub: &[usize]) -> Vec<usize> {
        let mut assigned = vec![false; self.order];
        let mut reps = Vec::new();
        for g in self.elements() {
            if assigned[g] {
                continue;
            }
            reps.push(g);
            for &s in sub {
                assigned[self.mul(s, g)] = true;
            }
        }
        reps
    }
}

/// A homomorphism between finite groups, given by its value table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupHom {
    pub source: FiniteGroup,
    pub target: FiniteGroup,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(
        source: FiniteGroup,
        target: FiniteGroup,
        map: Vec<usize>,
    ) -> Result<GroupHom, GroupError> {
        if map.len() != source.order() {
            return Err(GroupError::SizeMismatch { expected: source.order(), got: map.len() });
        }
        for &v in &map {
            if v >= target.order() {
                return Err(GroupError::EntryOutOfRange {
                    row: 0,
                    col: 0,
                    value: v,
                    order: target.order(),
                });
            }
        }
        for a in source.elements() {
            for b in source.elements() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(GroupError::NotHomomorphism { a, b });
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    pub fn identity(g: &FiniteGroup) -> GroupHom {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            map: g.elements().collect(),
        }
    }

    /// Inclusion of the subgroup spanned by `elems` (sorted) into `g`.
    pub fn inclusion(g: &FiniteGroup, elems: &[usize]) -> Result<GroupHom, GroupError> {
        if !g.is_subgroup(elems) {
            return Err(GroupError::NotSubgroup);
        }
        let n = elems.len();
        let mut table = vec![vec![0usize; n]; n];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                let p = g.mul(a, b);
                table[i][j] = elems.binary_search(&p).expect("closure");
            }
        }
        let sub = FiniteGroup::from_table(table)?;
        GroupHom::new(sub, g.clone(), elems.to_vec())
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.map.iter().all(|&v| {
            let fresh = !seen[v];
            seen[v] = true;
            fresh
        })
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        for &v in &self.map {
            seen[v] = true;
        }
        seen.iter().all(|&b| b)
    }

    pub fn image(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.map.iter().copied().collect();
        set.into_iter().collect()
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.source
            .elements()
            .filter(|&a| self.map[a] == self.target.identity())
            .collect()
    }

    pub fn compose(&self, then: &GroupHom) -> Result<GroupHom, GroupError> {
        if self.target != then.source {
            return Err(GroupError::SizeMismatch {
                expected: self.target.order(),
                got: then.source.order(),
            });
        }
        GroupHom::new(
            self.source.clone(),
            then.target.clone(),
            self.map.iter().map(|&v| then.map[v]).collect(),
        )
    }
}

/// A finite set with a right action of a finite group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RightGSet {
    pub group: FiniteGroup,
    size: usize,
    action: Vec<Vec<usize>>, // action[point][g]
}

impl RightGSet {
    pub fn new(
        group: FiniteGroup,
        size: usize,
        action: Vec<Vec<usize>>,
    ) -> Result<RightGSet, GroupError> {
        if action.len() != size {
            return Err(GroupError::SizeMismatch { expected: size, got: action.len() });
        }
        for (p, row) in action.iter().enumerate() {
            if row.len() != group.order() {
                return Err(GroupError::SizeMismatch {
                    expected: group.order(),
                    got: row.len(),
                });
            }
            for &v in row {
                if v >= size {
                    return Err(GroupError::PointOutOfRange { point: v, size });
                }
            }
            if row[group.identity()] != p {
                return Err(GroupError::NotAction { point: p, g: group.identity(), h: 0 });
            }
        }
        for p in 0..size {
            for g in group.elements() {
                for h in group.elements() {
                    if action[action[p][g]][h] != action[p][group.mul(g, h)] {
                        return Err(GroupError::NotAction { point: p, g, h });
                    }
                }
            }
        }
        Ok(RightGSet { group, size, action })
    }

    pub fn trivial(group: FiniteGroup, size: usize) -> RightGSet {
        let action = (0..size).map(|p| vec![p; group.order()]).collect();
        RightGSet { group, size, action }
    }

    /// The regular right G-set: G acting on itself by right multiplication.
    pub fn regular(group: &FiniteGroup) -> RightGSet {
        let action = group
            .elements()
            .map(|p| group.elements().map(|g| group.mul(p, g)).collect())
            .collect();
        RightGSet { group: group.clone(), size: group.order(), action }
    }

    /// Right coset space U\G with action (Ux)·g = U(xg); points are
    /// indexed by their least coset representative's rank.
    pub fn coset_space(group: &FiniteGroup, sub: &[usize]) -> Result<RightGSet, GroupError> {
        if !group.is_subgroup(sub) {
            return Err(GroupError::NotSubgroup);
        }
        let reps = group.right_coset_reps(sub);
        // element -> coset index
        let mut coset_of = vec![usize::MAX; group.order()];
        for (i, &r) in reps.iter().enumerate() {
            for &s in sub {
                coset_of[group.mul(s, r)] = i;
            }
        }
        let action = reps
            .iter()
            .map(|&r| group.elements().map(|g| coset_of[group.mul(r, g)]).collect())
            .collect();
        RightGSet::new(group.clone(), reps.len(), action)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn act(&self, point: usize, g: usize) -> usize {
        self.action[point][g]
    }

    pub fn disjoint_union(&self, other: &RightGSet) -> Result<RightGSet, GroupError> {
        if self.group != other.group {
            return Err(GroupError::SizeMismatch {
                expected: self.group.order(),
                got: other.group.order(),
            });
        }
        let mut action = self.action.clone();
        for row in &other.action {
            action.push(row.iter().map(|&v| v + self.size).collect());
        }
        RightGSet::new(self.group.clone(), self.size + other.size, action)
    }

    /// Restrict the action along a homomorphism into this set's group.
    pub fn restrict_along(&self, alpha: &GroupHom) -> Result<RightGSet, GroupError> {
        if alpha.target != self.group {
            return Err(GroupError::SizeMismatch {
                expected: self.group.order(),
                got: alpha.target.order(),
            });
        }
        let action = (0..self.size)
            .map(|p| alpha.source.elements().map(|g| self.act(p, alpha.apply(g))).collect())
            .collect();
        RightGSet::new(alpha.source.clone(), self.size, action)
    }

    /// Orbit of a point (sorted) and its stabilizer subgroup.
    pub fn orbit_stabilizer(&self, x: usize) -> Result<(Vec<usize>, Vec<usize>), GroupError> {
        if x >= self.size {
            return Err(GroupError::PointOutOfRange { point: x, size: self.size });
        }
        let orbit: BTreeSet<usize> = self.group.elements().map(|g| self.act(x, g)).collect();
        let stab: Vec<usize> = self.group.elements().filter(|&g| self.act(x, g) == x).collect();
        Ok((orbit.into_iter().collect(), stab))
    }

    /// Orbit representatives (least point per orbit), in increasing order.
    pub fn orbit_reps(&self) -> Vec<usize> {
        let mut seen = vec![false; self.size];
        let mut reps = Vec::new();
        for p in 0..self.size {
            if seen[p] {
                continue;
            }
            reps.push(p);
            for g in self.group.elements() {
                seen[self.act(p, g)] = true;
            }
        }
        reps
    }
}

/// A map of sets equivariant over a group homomorphism: the source carries
/// the source group's action, the target the target group's, and
/// f(x·g) = f(x)·alpha(g).
#[derive(Clone, Debug)]
pub struct EquivariantMap {
    pub source: RightGSet,
    pub target: RightGSet,
    pub alpha: GroupHom,
    map: Vec<usize>,
}

impl EquivariantMap {
    pub fn new(
        source: RightGSet,
        target: RightGSet,
        alpha: GroupHom,
        map: Vec<usize>,
    ) -> Result<EquivariantMap, GroupError> {
        if alpha.source != source.group || alpha.target != target.group {
            return Err(GroupError::SizeMismatch {
                expected: source.group.order(),
                got: alpha.source.order(),
            });
        }
        if map.len() != source.size() {
            return Err(GroupError::SizeMismatch { expected: source.size(), got: map.len() });
        }
        for &v in &map {
            if v >= target.size() {
                return Err(GroupError::PointOutOfRange { point: v, size: target.size() });
            }
        }
        for p in 0..source.size() {
            for g in source.group.elements() {
                if map[source.act(p, g)] != target.act(map[p], alpha.apply(g)) {
                    return Err(GroupError::NotEquivariant { point: p, g });
                }
            }
        }
        Ok(EquivariantMap { source, target, alpha, map })
    }

    pub fn apply(&self, p: usize) -> usize {
        self.map[p]
    }
}

/// The left adjoint to restriction along an injective homomorphism:
/// the source set is spread over a transversal of the image's right
/// cosets, with the ambient group permuting the copies.
/// The transversal is deterministic (least element per coset); the
/// point (s, x) is indexed as s_rank * |X| + x.
pub fn induced_object(
    alpha: &GroupHom,
    x: &RightGSet,
) -> Result<(RightGSet, Vec<usize>), GroupError> {
    if !alpha.is_injective() {
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for a in alpha.source.elements() {
            if let Some(&b) = seen.get(&alpha.apply(a)) {
                return Err(GroupError::NotInjective { a: b, b: a });
            }
            seen.insert(alpha.apply(a), a);
        }
        unreachable!();
    }
    if x.group != alpha.source {
        return Err(GroupError::SizeMismatch {
            expected: alpha.source.order(),
            got: x.group.order(),
        });
    }
    let h = &alpha.target;
    let image = alpha.image();
    let reps = h.right_coset_reps(&image);
    // element -> (coset index, source-group element g with elem = alpha(g)*rep)
    let mut locate = vec![(usize::MAX, usize::MAX); h.order()];
    for (i, &r) in reps.iter().enumerate() {
        for a in alpha.source.elements() {
            locate[h.mul(alpha.apply(a), r)] = (i, a);
        }
    }
    let n = x.size();
    let size = reps.len() * n;
    let mut action = vec![vec![0usize; h.order()]; size];
    for (i, &s) in reps.iter().enumerate() {
        for p in 0..n {
            for hh in h.elements() {
                // s*hh = alpha(g)*t  =>  (s, p)·hh = (t, p·g)
                let (t, g) = locate[h.mul(s, hh)];
                action[i * n + p][hh] = t * n + x.act(p, g);
            }
        }
    }
    let induced = RightGSet::new(h.clone(), size, action)?;
    // the inclusion of the identity-coset copy (coset containing the
    // identity, i.e. the one whose rep is the identity's coset)
    let id_coset = locate[h.identity()].0;
    let inclusion: Vec<usize> = (0..n).map(|p| id_coset * n + p).collect();
    Ok((induced, inclusion))
}

/// Orbit space of the kernel of a surjection, with the induced action of
/// the target group. Returns the quotient set and the projection map.
pub fn quotient_by_kernel(
    alpha: &GroupHom,
    x: &RightGSet,
) -> Result<(RightGSet, EquivariantMap), GroupError> {
    if !alpha.is_surjective() {
        let missing = (0..alpha.target.order())
            .find(|&v| !alpha.map.contains(&v))
            .unwrap();
        return Err(GroupError::NotSurjective { missing });
    }
    if x.group != alpha.source {
        return Err(GroupError::SizeMismatch {
            expected: alpha.source.order(),
            got: x.group.order(),
        });
    }
    let kernel = alpha.kernel();
    // orbit index per point, orbits numbered by least point
    let mut orbit_of = vec![usize::MAX; x.size()];
    let mut count = 0usize;
    for p in 0..x.size() {
        if orbit_of[p] != usize::MAX {
            continue;
        }
        for &k in &kernel {
            orbit_of[x.act(p, k)] = count;
        }
        count += 1;
    }
    // preimage of each target element, for defining the induced action
    let mut pre = vec![usize::MAX; alpha.target.order()];
    for a in alpha.source.elements() {
        let v = alpha.apply(a);
        if pre[v] == usize::MAX {
            pre[v] = a;
        }
    }
    let mut rep_point = vec![usize::MAX; count];
    for p in (0..x.size()).rev() {
        rep_point[orbit_of[p]] = p;
    }
    let action = (0..count)
        .map(|o| {
            alpha
                .target
                .elements()
                .map(|hh| orbit_of[x.act(rep_point[o], pre[hh])])
                .collect()
        })
        .collect();
    let y = RightGSet::new(alpha.target.clone(), count, action)?;
    let proj = EquivariantMap::new(x.clone(), y.clone(), alpha.clone(), orbit_of)?;
    Ok((y, proj))
}

/// Whether composing with `f` restricts maps-out bijectively, tested
/// against every target set of the ambient group up to `size_bound`
/// (every such set is a disjoint union of coset spaces, so the sweep is
/// exhaustive up to isomorphism). Returns a witness description on failure.
pub fn is_cocartesian(f: &EquivariantMap, size_bound: usize) -> Option<String> {
    let h = &f.target.group;
    let transitive: Vec<RightGSet> = h
        .all_subgroups()
        .iter()
        .filter(|u| h.order() / u.len() <= size_bound)
        .map(|u| RightGSet::coset_space(h, u).expect("subgroup"))
        .collect();
    // enumerate multisets of transitive sets with total size <= bound
    let mut targets: Vec<(RightGSet, String)> = Vec::new();
    fn build(
        parts: &[RightGSet],
        start: usize,
        current: Option<RightGSet>,
        label: &mut Vec<usize>,
        budget: usize,
        out: &mut Vec<(RightGSet, String)>,
    ) {
        if let Some(z) = &current {
            out.push((z.clone(), format!("orbit sizes {:?}", label)));
        }
        for i in start..parts.len() {
            if parts[i].size() > budget {
                continue;
            }
            let next = match &current {
                None => parts[i].clone(),
                Some(z) => z.disjoint_union(&parts[i]).expect("same group"),
            };
            label.push(parts[i].size());
            build(parts, i, Some(next), label, budget - parts[i].size(), out);
            label.pop();
        }
    }
    build(&transitive, 0, None, &mut Vec::new(), size_bound, &mut targets);

    for (z, label) in &targets {
        let homs_from_target = equivariant_maps(&f.target, z);
        let z_restricted = z.restrict_along(&f.alpha).expect("valid hom");
        let homs_from_source = equivariant_maps(&f.source, &z_restricted);
        // compose each target-side map with f and compare the image set
        let mut composed: BTreeSet<Vec<usize>> = BTreeSet::new();
        for phi in &homs_from_target {
            let comp: Vec<usize> = (0..f.source.size()).map(|p| phi[f.apply(p)]).collect();
            if !composed.insert(comp) {
                return Some(format!("restriction not injective against target ({label})"));
            }
        }
        let all_source: BTreeSet<Vec<usize>> = homs_from_source.into_iter().collect();
        if composed != all_source {
            return Some(format!("restriction not surjective against target ({label})"));
        }
    }
    None
}

/// All equivariant maps between two right sets of the same group,
/// as point-image vectors. Enumerates images of orbit representatives.
pub fn equivariant_maps(from: &RightGSet, to: &RightGSet) -> Vec<Vec<usize>> {
    let g = &from.group;
    let reps = from.orbit_reps();
    // valid images per rep: points of `to` fixed by the rep's stabilizer
    let mut choices: Vec<Vec<usize>> = Vec::new();
    for &r in &reps {
        let (_, stab) = from.orbit_stabilizer(r).expect("in range");
        let valid: Vec<usize> = (0..to.size())
            .filter(|&z| stab.iter().all(|&s| to.act(z, s) == z))
            .collect();
        choices.push(valid);
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; reps.len()];
    'outer: loop {
        // materialize the map determined by the current picks
        let mut map = vec![usize::MAX; from.size()];
        for (i, &r) in reps.iter().enumerate() {
            if choices[i].is_empty() {
                break 'outer;
            }
            let z = choices[i][pick[i]];
            for gg in g.elements() {
                map[from.act(r, gg)] = to.act(z, gg);
            }
        }
        out.push(map);
        // increment multi-index
        let mut i = 0;
        loop {
            if i == reps.len() {
                break 'outer;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
    out
}

/// Double cosets A\H/B... representatives (least element per class) with
/// class sizes, for subgroups A and B of H.
pub fn double_cosets(
    h: &FiniteGroup,
    a: &[usize],
    b: &[usize],
) -> Result<Vec<(usize, usize)>, GroupError> {
    if !h.is_subgroup(a) || !h.is_subgroup(b) {
        return Err(GroupError::NotSubgroup);
    }
    let mut class_of = vec![usize::MAX; h.order()];
    let mut out = Vec::new();
    for x in h.elements() {
        if class_of[x] != usize::MAX {
            continue;
        }
        let idx = out.len();
        let mut size = 0usize;
        let mut stack = vec![x];
        class_of[x] = idx;
        size += 1;
        while let Some(y) = stack.pop() {
            for &aa in a {
                for &bb in b {
                    let z = h.mul(h.mul(aa, y), bb);
                    if class_of[z] == usize::MAX {
                        class_of[z] = idx;
                        size += 1;
                        stack.push(z);
                    }
                }
            }
        }
        out.push((x, size));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::symmetric(3)
    }

    #[test]
    fn cyclic_two_validates() {
        let g = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn repeated_entry_is_not_latin_square() {
        let err = FiniteGroup::from_table(vec![vec![0, 0], vec![1, 0]]).unwrap_err();
        assert!(matches!(err, GroupError::NotLatinSquare { .. }));
    }

    #[test]
    fn latin_square_without_associativity_rejected() {
        // a 5x5 Latin square that is not a group table
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 3, 4, 0, 1],
            vec![3, 4, 1, 2, 0],
            vec![4, 2, 0, 1, 3],
        ];
        let err = FiniteGroup::from_table(t).unwrap_err();
        assert!(matches!(err, GroupError::NotAssociative { .. } | GroupError::MissingInverse { .. }));
    }

    #[test]
    fn symmetric_three_from_permutations() {
        let g = s3();
        assert_eq!(g.order(), 6);
        let orders: Vec<usize> = g.elements().map(|a| g.element_order(a)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 3);
        assert_eq!(orders.iter().filter(|&&o| o == 3).count(), 2);
    }

    #[test]
    fn subgroups_of_symmetric_three() {
        let g = s3();
        let subs = g.all_subgroups();
        // {1}, three C2's, one C3, S3
        assert_eq!(subs.len(), 6);
        let sizes: Vec<usize> = subs.iter().map(|s| s.len()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn induced_object_sizes_and_unit() {
        let g = s3();
        // order-2 subgroup inclusion
        let sub = g
            .all_subgroups()
            .into_iter()
            .find(|s| s.len() == 2)
            .unwrap();
        let alpha = GroupHom::inclusion(&g, &sub).unwrap();
        let x = RightGSet::trivial(alpha.source.clone(), 1);
        let (ind, incl) = induced_object(&alpha, &x).unwrap();
        assert_eq!(ind.size(), 3); // |X| * [S3 : C2]
        // the inclusion is alpha-equivariant: check via the restricted set
        let restricted = ind.restrict_along(&alpha).unwrap();
        for p in 0..x.size() {
            for a in alpha.source.elements() {
                assert_eq!(incl[x.act(p, a)], restricted.act(incl[p], a));
            }
        }
        // isomorphic to the coset space
        let cosets = RightGSet::coset_space(&g, &sub).unwrap();
        assert!(!equivariant_maps(&ind, &cosets).is_empty());
        // trivial subgroup inside C3: regular set
        let c3 = FiniteGroup::cyclic(3);
        let alpha = GroupHom::inclusion(&c3, &[0]).unwrap();
        let x = RightGSet::trivial(alpha.source.clone(), 1);
        let (ind, _) = induced_object(&alpha, &x).unwrap();
        assert_eq!(ind.size(), 3);
        let (orbit, stab) = ind.orbit_stabilizer(0).unwrap();
        assert_eq!(orbit.len(), 3);
        assert_eq!(stab, vec![0]);
    }

    #[test]
    fn induced_along_identity_is_isomorphic() {
        let g = s3();
        let alpha = GroupHom::identity(&g);
        let x = RightGSet::coset_space(&g, &[0, 1]).unwrap_or_else(|_| RightGSet::regular(&g));
        let (ind, _) = induced_object(&alpha, &x).unwrap();
        assert_eq!(ind.size(), x.size());
    }

    #[test]
    fn quotient_by_kernel_collapses_orbits() {
        let c4 = FiniteGroup::cyclic(4);
        let c2 = FiniteGroup::cyclic(2);
        let alpha = GroupHom::new(c4.clone(), c2.clone(), vec![0, 1, 0, 1]).unwrap();
        let x = RightGSet::regular(&c4);
        let (y, proj) = quotient_by_kernel(&alpha, &x).unwrap();
        assert_eq!(y.size(), 2);
        // regular C2 action on the quotient
        assert_eq!(y.act(0, 1), 1);
        assert_eq!(y.act(1, 1), 0);
        assert_eq!(proj.apply(0), proj.apply(2));
        // full collapse
        let triv = FiniteGroup::trivial();
        let beta = GroupHom::new(c2.clone(), triv, vec![0, 0]).unwrap();
        let x2 = RightGSet::regular(&c2);
        let (y2, _) = quotient_by_kernel(&beta, &x2).unwrap();
        assert_eq!(y2.size(), 1);
    }

    #[test]
    fn quotient_map_is_cocartesian() {
        let c4 = FiniteGroup::cyclic(4);
        let c2 = FiniteGroup::cyclic(2);
        let alpha = GroupHom::new(c4.clone(), c2, vec![0, 1, 0, 1]).unwrap();
        let x = RightGSet::regular(&c4);
        let (_, proj) = quotient_by_kernel(&alpha, &x).unwrap();
        assert_eq!(is_cocartesian(&proj, 6), None);
    }

    #[test]
    fn identity_map_is_cocartesian() {
        let g = FiniteGroup::cyclic(3);
        let x = RightGSet::regular(&g);
        let f = EquivariantMap::new(
            x.clone(),
            x.clone(),
            GroupHom::identity(&g),
            (0..3).collect(),
        )
        .unwrap();
        assert_eq!(is_cocartesian(&f, 6), None);
    }

    #[test]
    fn point_inclusion_with_trivial_actions_is_not_cocartesian() {
        let triv = FiniteGroup::trivial();
        let one = RightGSet::trivial(triv.clone(), 1);
        let two = RightGSet::trivial(triv.clone(), 2);
        let f = EquivariantMap::new(one, two, GroupHom::identity(&triv), vec![0]).unwrap();
        let witness = is_cocartesian(&f, 4);
        assert!(witness.is_some());
    }

    #[test]
    fn component_inclusion_with_transitive_indexing_is_cocartesian() {
        // two points swapped by C2, component inclusion from the trivial group
        let c2 = FiniteGroup::cyclic(2);
        let triv = FiniteGroup::trivial();
        let y = RightGSet::regular(&c2);
        let x = RightGSet::trivial(triv.clone(), 1);
        let alpha = GroupHom::new(triv, c2, vec![0]).unwrap();
        let f = EquivariantMap::new(x, y, alpha, vec![0]).unwrap();
        assert_eq!(is_cocartesian(&f, 6), None);
    }

    #[test]
    fn double_coset_counts_in_symmetric_three() {
        let g = s3();
        let all: Vec<usize> = g.elements().collect();
        assert_eq!(double_cosets(&g, &all, &all).unwrap().len(), 1);
        let subs = g.all_subgroups();
        let c3 = subs.iter().find(|s| s.len() == 3).unwrap().clone();
        let c2 = subs.iter().find(|s| s.len() == 2).unwrap().clone();
        let dc = double_cosets(&g, &c3, &c2).unwrap();
        assert_eq!(dc.len(), 1);
        assert_eq!(dc[0].1, 6);
        let dc = double_cosets(&g, &c2, &c2).unwrap();
        assert_eq!(dc.len(), 2);
        let mut sizes: Vec<usize> = dc.iter().map(|&(_, s)| s).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 4]);
    }

    #[test]
    fn double_coset_sizes_partition_groups_up_to_order_24() {
        let catalog = [
            FiniteGroup::cyclic(12),
            FiniteGroup::symmetric(4),
            FiniteGroup::symmetric(3),
        ];
        for g in &catalog {
            let subs = g.all_subgroups();
            for a in &subs {
                for b in &subs {
                    let dc = double_cosets(g, a, b).unwrap();
                    let total: usize = dc.iter().map(|&(_, s)| s).sum();
                    assert_eq!(total, g.order());
                    // deterministic least representatives
                    for &(r, _) in &dc {
                        assert!(dc.iter().all(|&(r2, _)| r2 == r || r2 != r));
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_stabilizer_identity_on_coset_spaces() {
        let g = s3();
        let subs = g.all_subgroups();
        for sub in &subs {
            let x = RightGSet::coset_space(&g, sub).unwrap();
            for p in 0..x.size() {
                let (orbit, stab) = x.orbit_stabilizer(p).unwrap();
                assert_eq!(orbit.len() * stab.len(), g.order());
                assert!(g.is_subgroup(&stab));
            }
        }
        // trivial action
        let x = RightGSet::trivial(g.clone(), 2);
        let (orbit, stab) = x.orbit_stabilizer(0).unwrap();
        assert_eq!(orbit, vec![0]);
        assert_eq!(stab.len(), g.order());
        // regular
        let x = RightGSet::regular(&g);
        let (orbit, stab) = x.orbit_stabilizer(0).unwrap();
        assert_eq!(orbit.len(), 6);
        assert_eq!(stab, vec![g.identity()]);
    }
}
