//! Finite-level models of points over finite and local fields: sets with
//! commuting group and Frobenius actions, closed points, and the
//! Frobenius-extended stabilizer groups in split form K ⋊ ℤ.

use num_integer::Integer;
use thiserror::Error;

use crate::groups::{FiniteGroup, GroupHom, RightGSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("base prime {0} is not prime")]
    NotPrime(u64),
    #[error("residue exponent must be >= 1")]
    ZeroResidueExponent,
    #[error("frobenius is not a permutation of the point set")]
    FrobeniusNotPermutation,
    #[error("frobenius does not commute with the group action at point {point}, element {g}")]
    FrobeniusNotEquivariant { point: usize, g: usize },
    #[error("inertia data requires a local base field")]
    InertiaOnFiniteBase,
    #[error("inertia action does not commute with the group action at point {point}")]
    InertiaNotEquivariant { point: usize },
    #[error("frobenius conjugation does not realize the declared inertia twist at point {point}, element {q}")]
    BadInertiaTwist { point: usize, q: usize },
    #[error("inertia twist is not an automorphism")]
    TwistNotAutomorphism,
    #[error("point {point} out of range for a set of size {size}")]
    PointOutOfRange { point: usize, size: usize },
    #[error("theta is not an automorphism of the kernel")]
    ThetaNotAutomorphism,
    #[error("marked inertia subgroup is not a theta-stable normal subgroup")]
    BadInertiaSubgroup,
    #[error("extension degree must be >= 1")]
    ZeroExtensionDegree,
    #[error("map is not equivariant at point {point}, element {g}")]
    MapNotEquivariant { point: usize, g: usize },
    #[error("map does not intertwine the Frobenii at point {point}")]
    MapNotFrobeniusCompatible { point: usize },
    #[error("map does not commute with inertia at point {point}, element {q}")]
    MapNotInertiaCompatible { point: usize, q: usize },
    #[error("morphism endpoints live over different base fields")]
    BaseMismatch,
    #[error("group error: {0}")]
    Group(#[from] crate::groups::GroupError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldKind {
    Finite,
    Local,
}

/// The base field: residue field of size q = p^f, either a finite field
/// or a local field with that residue field.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BaseField {
    pub p: u64,
    pub f: u32,
    pub kind: FieldKind,
}

impl BaseField {
    pub fn new(p: u64, f: u32, kind: FieldKind) -> Result<BaseField, ArithError> {
        if f == 0 {
            return Err(ArithError::ZeroResidueExponent);
        }
        let prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
        if !prime {
            return Err(ArithError::NotPrime(p));
        }
        Ok(BaseField { p, f, kind })
    }

    /// Residue cardinality q = p^f.
    pub fn q(&self) -> u64 {
        self.p.pow(self.f)
    }
}

/// Finite-quotient inertia: a finite group acting on the points,
/// commuting with G, and normalized by Frobenius through a declared
/// automorphism (frobenius ∘ a_q = a_{twist(q)} ∘ frobenius).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InertiaData {
    pub group: FiniteGroup,
    pub action: Vec<Vec<usize>>, // action[point][q]
    pub frob_twist: Vec<usize>,  // automorphism of group
}

/// A finite set of geometric points with a right G-action, a commuting
/// Frobenius permutation, and (over a local base) finite-quotient inertia.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaloisGSet {
    pub group: FiniteGroup,
    action: RightGSet,
    frobenius: Vec<usize>,
    frob_inverse: Vec<usize>,
    inertia: Option<InertiaData>,
    inertia_inv_twist: Vec<usize>,
    pub base: BaseField,
}

impl GaloisGSet {
    pub fn new(
        group: FiniteGroup,
        size: usize,
        action: Vec<Vec<usize>>,
        frobenius: Vec<usize>,
        inertia: Option<InertiaData>,
        base: BaseField,
    ) -> Result<GaloisGSet, ArithError> {
        let action = RightGSet::new(group.clone(), size, action)?;
        if frobenius.len() != size {
            return Err(ArithError::FrobeniusNotPermutation);
        }
        let mut seen = vec![false; size];
        for &v in &frobenius {
            if v >= size || seen[v] {
                return Err(ArithError::FrobeniusNotPermutation);
            }
            seen[v] = true;
        }
        for p in 0..size {
            for g in group.elements() {
                if frobenius[action.act(p, g)] != action.act(frobenius[p], g) {
                    return Err(ArithError::FrobeniusNotEquivariant { point: p, g });
                }
            }
        }
        let mut frob_inverse = vec![0usize; size];
        for (p, &v) in frobenius.iter().enumerate() {
            frob_inverse[v] = p;
        }
        let mut inertia_inv_twist = Vec::new();
        if let Some(inr) = &inertia {
            if base.kind != FieldKind::Local {
                return Err(ArithError::InertiaOnFiniteBase);
            }
            let iact = RightGSet::new(inr.group.clone(), size, inr.action.clone())?;
            for p in 0..size {
                for g in group.elements() {
                    for q in inr.group.elements() {
                        if iact.act(action.act(p, g), q) != action.act(iact.act(p, q), g) {
                            return Err(ArithError::InertiaNotEquivariant { point: p });
                        }
                    }
                }
            }
            // twist is an automorphism
            if inr.frob_twist.len() != inr.group.order() {
                return Err(ArithError::TwistNotAutomorphism);
            }
            let mut seen = vec![false; inr.group.order()];
            for &v in &inr.frob_twist {
                if v >= inr.group.order() || seen[v] {
                    return Err(ArithError::TwistNotAutomorphism);
                }
                seen[v] = true;
            }
            for a in inr.group.elements() {
                for b in inr.group.elements() {
                    if inr.frob_twist[inr.group.mul(a, b)]
                        != inr.group.mul(inr.frob_twist[a], inr.frob_twist[b])
                    {
                        return Err(ArithError::TwistNotAutomorphism);
                    }
                }
            }
            // frobenius(p·q) = frobenius(p)·twist(q)
            for p in 0..size {
                for q in inr.group.elements() {
                    if frobenius[iact.act(p, q)]
                        != iact.act(frobenius[p], inr.frob_twist[q])
                    {
                        return Err(ArithError::BadInertiaTwist { point: p, q });
                    }
                }
            }
            inertia_inv_twist = vec![0usize; inr.group.order()];
            for (q, &v) in inr.frob_twist.iter().enumerate() {
                inertia_inv_twist[v] = q;
            }
        }
        Ok(GaloisGSet {
            group,
            action,
            frobenius,
            frob_inverse,
            inertia,
            inertia_inv_twist,
            base,
        })
    }

    pub fn size(&self) -> usize {
        self.action.size()
    }

    pub fn act(&self, p: usize, g: usize) -> usize {
        self.action.act(p, g)
    }

    pub fn gset(&self) -> &RightGSet {
        &self.action
    }

    pub fn frob(&self, p: usize, m: i64) -> usize {
        let mut x = p;
        if m >= 0 {
            for _ in 0..m {
                x = self.frobenius[x];
            }
        } else {
            for _ in 0..(-m) {
                x = self.frob_inverse[x];
            }
        }
        x
    }

    pub fn inertia(&self) -> Option<&InertiaData> {
        self.inertia.as_ref()
    }

    /// The inertia group (trivial when no inertia data is attached).
    pub fn inertia_group(&self) -> FiniteGroup {
        match &self.inertia {
            Some(inr) => inr.group.clone(),
            None => FiniteGroup::trivial(),
        }
    }

    pub fn inertia_act(&self, p: usize, q: usize) -> usize {
        match &self.inertia {
            Some(inr) => inr.action[p][q],
            None => p,
        }
    }

    /// The declared twist automorphism applied m times (m may be negative).
    pub fn twist_pow(&self, q: usize, m: i64) -> usize {
        let inr = match &self.inertia {
            Some(inr) => inr,
            None => return q,
        };
        let mut x = q;
        if m >= 0 {
            for _ in 0..m {
                x = inr.frob_twist[x];
            }
        } else {
            for _ in 0..(-m) {
                x = self.inertia_inv_twist[x];
            }
        }
        x
    }

    /// Galois action of the pair (q, m): p ↦ Φ^m(p)·q.
    pub fn galois_act(&self, p: usize, q: usize, m: i64) -> usize {
        self.inertia_act(self.frob(p, m), q)
    }

    /// Whether the triple (g, q, m) stabilizes x̄ arithmetically:
    /// x̄·g = Φ^m(x̄)·q.
    pub fn stabilizes(&self, xbar: usize, g: usize, q: usize, m: i64) -> bool {
        self.act(xbar, g) == self.galois_act(xbar, q, m)
    }

    /// Product of arithmetic-stabilizer triples:
    /// (g, q, m)(g', q', m') = (gg', τ^m(q')·q, m + m').
    pub fn triple_mul(
        &self,
        a: (usize, usize, i64),
        b: (usize, usize, i64),
    ) -> (usize, usize, i64) {
        let iq = self.inertia_group();
        (
            self.group.mul(a.0, b.0),
            iq.mul(self.twist_pow(b.1, a.2), a.1),
            a.2 + b.2,
        )
    }

    pub fn triple_inv(&self, a: (usize, usize, i64)) -> (usize, usize, i64) {
        let iq = self.inertia_group();
        (
            self.group.inv(a.0),
            self.twist_pow(iq.inv(a.1), -a.2),
            -a.2,
        )
    }

    /// Size of the Frobenius orbit through p.
    pub fn frob_orbit_size(&self, p: usize) -> usize {
        let mut x = self.frobenius[p];
        let mut n = 1usize;
        while x != p {
            x = self.frobenius[x];
            n += 1;
        }
        n
    }

    /// Genuine right action of triples on points:
    /// p·(g, q, m) = Φ^m((p·g)·q).
    pub fn path_act(&self, p: usize, t: (usize, usize, i64)) -> usize {
        self.frob(self.inertia_act(self.act(p, t.0), t.1), t.2)
    }

    /// Composition law for `path_act`:
    /// p·(a then b) = (p·a)·b, so (g,q,m)(g',q',m') = (gg', q·τ^{-m}(q'), m+m').
    pub fn path_mul(
        &self,
        a: (usize, usize, i64),
        b: (usize, usize, i64),
    ) -> (usize, usize, i64) {
        let iq = self.inertia_group();
        (
            self.group.mul(a.0, b.0),
            iq.mul(a.1, self.twist_pow(b.1, -a.2)),
            a.2 + b.2,
        )
    }

    pub fn path_inv(&self, a: (usize, usize, i64)) -> (usize, usize, i64) {
        let iq = self.inertia_group();
        (
            self.group.inv(a.0),
            self.twist_pow(iq.inv(a.1), a.2),
            -a.2,
        )
    }

    /// The loop (for `path_act`) at a point fixed by the stabilizer
    /// triple (g, q, m): x̄·g = Φ^m(x̄)·q exactly when Φ^{-m}((x̄·g)·q^{-1}) = x̄.
    pub fn loop_of_stab(&self, s: (usize, usize, i64)) -> (usize, usize, i64) {
        (s.0, self.inertia_group().inv(s.1), -s.2)
    }

    /// Inverse of `loop_of_stab`.
    pub fn stab_of_loop(&self, l: (usize, usize, i64)) -> (usize, usize, i64) {
        (l.0, self.inertia_group().inv(l.1), -l.2)
    }

    /// Transport a stabilizer triple at p = path_act(b, t) to a stabilizer
    /// triple at b, by conjugating the corresponding loop with the path t.
    pub fn transport_stab(
        &self,
        t: (usize, usize, i64),
        s: (usize, usize, i64),
    ) -> (usize, usize, i64) {
        let conj = self.path_mul(self.path_mul(t, self.loop_of_stab(s)), self.path_inv(t));
        self.stab_of_loop(conj)
    }

    /// Least path triple (m, then g, then q ascending) with
    /// path_act(from, (g, q, m)) = to; None if the points lie in
    /// different closed points.
    pub fn connect_path(&self, from: usize, to: usize) -> Option<(usize, usize, i64)> {
        let period = self.frob_orbit_size(from) as i64 * self.inertia_group().order().max(1) as i64;
        let iq = self.inertia_group();
        for m in 0..=period {
            for g in self.group.elements() {
                for q in iq.elements() {
                    if self.path_act(from, (g, q, m)) == to {
                        return Some((g, q, m));
                    }
                }
            }
        }
        None
    }

    /// Find a triple (g, q, m) with 0 <= m < frobenius period carrying
    /// `from` to `to` via to = Φ^m(from·g)·q, least (m, g, q); None if the
    /// points lie in different closed points.
    pub fn connect(&self, from: usize, to: usize) -> Option<(usize, usize, i64)> {
        let period = self.frob_orbit_size(from) as i64 * self.inertia_group().order().max(1) as i64;
        let iq = self.inertia_group();
        for m in 0..=period {
            for g in self.group.elements() {
                for q in iq.elements() {
                    if self.galois_act(self.act(from, g), q, m) == to {
                        return Some((g, q, m));
                    }
                }
            }
        }
        None
    }
}

/// The split form of an arithmetic stabilizer: elements are pairs
/// (k, j) with k in a finite kernel and j an integer, multiplying as
/// (k, j)(k', j') = (k·θ^j(k'), j + j'). The grading map sends (k, j)
/// to j·frob_step.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeilLevelGroup {
    pub kernel: FiniteGroup,
    theta: Vec<usize>,
    theta_inv: Vec<usize>,
    pub frob_step: i64,
    pub inertia: Vec<usize>, // sorted kernel indices of the marked subgroup
    pub base: BaseField,
}

pub type WElem = (usize, i64);

impl WeilLevelGroup {
    pub fn new(
        kernel: FiniteGroup,
        theta: Vec<usize>,
        frob_step: i64,
        inertia: Vec<usize>,
        base: BaseField,
    ) -> Result<WeilLevelGroup, ArithError> {
        if frob_step < 1 {
            return Err(ArithError::ZeroExtensionDegree);
        }
        let n = kernel.order();
        if theta.len() != n {
            return Err(ArithError::ThetaNotAutomorphism);
        }
        let mut seen = vec![false; n];
        for &v in &theta {
            if v >= n || seen[v] {
                return Err(ArithError::ThetaNotAutomorphism);
            }
            seen[v] = true;
        }
        for a in 0..n {
            for b in 0..n {
                if theta[kernel.mul(a, b)] != kernel.mul(theta[a], theta[b]) {
                    return Err(ArithError::ThetaNotAutomorphism);
                }
            }
        }
        // marked subgroup: subgroup, theta-stable, normal in the kernel
        if !kernel.is_subgroup(&inertia) {
            return Err(ArithError::BadInertiaSubgroup);
        }
        for &k in &inertia {
            if inertia.binary_search(&theta[k]).is_err() {
                return Err(ArithError::BadInertiaSubgroup);
            }
        }
        for &k in &inertia {
            for g in kernel.elements() {
                if inertia.binary_search(&kernel.conjugate(k, g)).is_err() {
                    return Err(ArithError::BadInertiaSubgroup);
                }
            }
        }
        let mut theta_inv = vec![0usize; n];
        for (k, &v) in theta.iter().enumerate() {
            theta_inv[v] = k;
        }
        Ok(WeilLevelGroup {
            kernel,
            theta,
            theta_inv,
            frob_step,
            inertia,
            base,
        })
    }

    pub fn theta_pow(&self, k: usize, j: i64) -> usize {
        let mut x = k;
        if j >= 0 {
            for _ in 0..j {
                x = self.theta[x];
            }
        } else {
            for _ in 0..(-j) {
                x = self.theta_inv[x];
            }
        }
        x
    }

    pub fn identity(&self) -> WElem {
        (self.kernel.identity(), 0)
    }

    pub fn mul(&self, a: WElem, b: WElem) -> WElem {
        (self.kernel.mul(a.0, self.theta_pow(b.0, a.1)), a.1 + b.1)
    }

    pub fn inv(&self, a: WElem) -> WElem {
        (self.theta_pow(self.kernel.inv(a.0), -a.1), -a.1)
    }

    pub fn pow(&self, a: WElem, e: i64) -> WElem {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut acc = self.identity();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// Grading: (k, j) ↦ j·frob_step, onto frob_step·ℤ with kernel K.
    pub fn grade(&self, a: WElem) -> i64 {
        a.1 * self.frob_step
    }
}

/// How the split form of a stabilizer sits inside the ambient set of
/// triples: the pair realizing each kernel index, and the chosen
/// minimal-degree Frobenius lift w₀.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeilEmbedding {
    /// kernel index -> (g, q) with x̄·g = x̄·q
    pub kernel_pairs: Vec<(usize, usize)>,
    /// the (g, q) part of w₀; its degree is the group's frob_step
    pub w0_pair: (usize, usize),
}

impl WeilEmbedding {
    /// The ambient triple realizing the split element (k, j).
    pub fn realize(&self, x: &GaloisGSet, w: &WeilLevelGroup, e: WElem) -> (usize, usize, i64) {
        let (kg, kq) = self.kernel_pairs[e.0];
        let mut acc = (kg, kq, 0i64);
        let w0 = (self.w0_pair.0, self.w0_pair.1, w.frob_step);
        let w0use = if e.1 >= 0 { w0 } else { x.triple_inv(w0) };
        for _ in 0..e.1.unsigned_abs() {
            acc = x.triple_mul(acc, w0use);
        }
        acc
    }

    /// Split coordinates of an ambient stabilizer triple, if it lies in
    /// the stabilizer: the Frobenius degree must be a multiple of the
    /// group's step and the residual pair must be a kernel pair.
    pub fn split_of(
        &self,
        x: &GaloisGSet,
        w: &WeilLevelGroup,
        t: (usize, usize, i64),
    ) -> Option<WElem> {
        if t.2 % w.frob_step != 0 {
            return None;
        }
        let j = t.2 / w.frob_step;
        let w0j = self.realize(x, w, (w.kernel.identity(), j));
        let residue = x.triple_mul(t, x.triple_inv(w0j));
        debug_assert_eq!(residue.2, 0);
        let k = self.kernel_pairs.binary_search(&(residue.0, residue.1)).ok()?;
        Some((k, j))
    }
}

/// A closed point: a G-orbit of Galois orbits, with its deterministic
/// basepoint, residue degree, decomposition group, and stabilizer.
#[derive(Clone, Debug)]
pub struct PointData {
    pub orbit_id: usize,
    pub basepoint: usize,
    /// all geometric points of the closed point, sorted
    pub points: Vec<usize>,
    /// Frobenius-orbit size of the basepoint (residue degree)
    pub degree: usize,
    pub group: WeilLevelGroup,
    pub embedding: WeilEmbedding,
    /// elements of G preserving the Galois orbit of the basepoint
    pub decomposition: Vec<usize>,
}

/// Closed points of a Galois G-set: G-orbits of Galois orbits, with
/// least-index basepoints and split stabilizers.
pub fn points_of(x: &GaloisGSet) -> Vec<PointData> {
    let n = x.size();
    let iq = x.inertia_group();
    // Galois orbit id per point (orbit of <frobenius, inertia>)
    let mut gal_orbit = vec![usize::MAX; n];
    let mut gal_count = 0usize;
    for p in 0..n {
        if gal_orbit[p] != usize::MAX {
            continue;
        }
        let mut stack = vec![p];
        gal_orbit[p] = gal_count;
        while let Some(u) = stack.pop() {
            let mut nexts = vec![x.frob(u, 1)];
            for q in iq.elements() {
                nexts.push(x.inertia_act(u, q));
            }
            for v in nexts {
                if gal_orbit[v] == usize::MAX {
                    gal_orbit[v] = gal_count;
                    stack.push(v);
                }
            }
        }
        gal_count += 1;
    }
    // G-orbits of Galois orbits
    let mut closed = vec![usize::MAX; n];
    let mut out = Vec::new();
    for p in 0..n {
        if closed[p] != usize::MAX {
            continue;
        }
        let orbit_id = out.len();
        // all points whose galois orbit is G-translated from p's
        let mut pts: Vec<usize> = Vec::new();
        let mut stack = vec![p];
        closed[p] = orbit_id;
        pts.push(p);
        while let Some(u) = stack.pop() {
            let mut nexts = vec![x.frob(u, 1)];
            for q in iq.elements() {
                nexts.push(x.inertia_act(u, q));
            }
            for g in x.group.elements() {
                nexts.push(x.act(u, g));
            }
            for v in nexts {
                if closed[v] == usize::MAX {
                    closed[v] = orbit_id;
                    pts.push(v);
                    stack.push(v);
                }
            }
        }
        pts.sort();
        let basepoint = p;
        let (group, embedding) = weil_group_at(x, basepoint).expect("basepoint in range");
        let my_gal = gal_orbit[basepoint];
        let decomposition: Vec<usize> = x
            .group
            .elements()
            .filter(|&g| gal_orbit[x.act(basepoint, g)] == my_gal)
            .collect();
        out.push(PointData {
            orbit_id,
            basepoint,
            points: pts,
            degree: x.frob_orbit_size(basepoint),
            group,
            embedding,
            decomposition,
        });
    }
    out
}

/// The arithmetic stabilizer of a geometric point, in split form:
/// K = triples of degree 0, w₀ a least lift of minimal positive degree,
/// θ = conjugation by w₀.
pub fn weil_group_at(
    x: &GaloisGSet,
    xbar: usize,
) -> Result<(WeilLevelGroup, WeilEmbedding), ArithError> {
    if xbar >= x.size() {
        return Err(ArithError::PointOutOfRange { point: xbar, size: x.size() });
    }
    let iq = x.inertia_group();
    // kernel: pairs (g, q) with x̄·g = x̄·q
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for g in x.group.elements() {
        for q in iq.elements() {
            if x.stabilizes(xbar, g, q, 0) {
                pairs.push((g, q));
            }
        }
    }
    let pair_index = |p: (usize, usize)| pairs.binary_search(&p).expect("closure");
    let k_order = pairs.len();
    let mut table = vec![vec![0usize; k_order]; k_order];
    for (i, &a) in pairs.iter().enumerate() {
        for (j, &b) in pairs.iter().enumerate() {
            let prod = x.triple_mul((a.0, a.1, 0), (b.0, b.1, 0));
            table[i][j] = pair_index((prod.0, prod.1));
        }
    }
    let kernel = FiniteGroup::from_table(table)?;
    // minimal positive Frobenius degree
    let r = x.frob_orbit_size(xbar) as i64;
    let mut n0 = r;
    let mut w0_pair = (x.group.identity(), iq.identity());
    'search: for m in 1..=r {
        for g in x.group.elements() {
            for q in iq.elements() {
                if x.stabilizes(xbar, g, q, m) {
                    n0 = m;
                    w0_pair = (g, q);
                    break 'search;
                }
            }
        }
    }
    // theta = conjugation by w0 on the kernel
    let w0 = (w0_pair.0, w0_pair.1, n0);
    let w0_inv = x.triple_inv(w0);
    let theta: Vec<usize> = pairs
        .iter()
        .map(|&(g, q)| {
            let t = x.triple_mul(x.triple_mul(w0, (g, q, 0)), w0_inv);
            debug_assert_eq!(t.2, 0);
            pair_index((t.0, t.1))
        })
        .collect();
    // marked inertia: kernel elements with trivial G-part
    let inertia: Vec<usize> = pairs
        .iter()
        .enumerate()
        .filter(|&(_, &(g, _))| g == x.group.identity())
        .map(|(i, _)| i)
        .collect();
    let group = WeilLevelGroup::new(kernel, theta, n0, inertia, x.base)?;
    Ok((group, WeilEmbedding { kernel_pairs: pairs, w0_pair }))
}

/// A homomorphism between split stabilizers, stored by its effect on the
/// kernel and on the chosen Frobenius lift.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SplitHom {
    /// image of each source kernel element, a degree-0 target element
    pub kernel_map: Vec<usize>,
    /// image of the source w₀ in target split coordinates
    pub w0_image: WElem,
}

impl SplitHom {
    pub fn identity(w: &WeilLevelGroup) -> SplitHom {
        SplitHom {
            kernel_map: w.kernel.elements().collect(),
            w0_image: (w.kernel.identity(), 1),
        }
    }

    pub fn apply(&self, target: &WeilLevelGroup, e: WElem) -> WElem {
        let k = (self.kernel_map[e.0], 0);
        target.mul(k, target.pow(self.w0_image, e.1))
    }

    /// Check the homomorphism law on all kernel pairs and the
    /// θ-intertwining relation driven by w₀.
    pub fn validate(&self, source: &WeilLevelGroup, target: &WeilLevelGroup) -> bool {
        let n = source.kernel.order();
        if self.kernel_map.len() != n {
            return false;
        }
        for a in 0..n {
            for b in 0..n {
                if self.kernel_map[source.kernel.mul(a, b)]
                    != target.kernel.mul(self.kernel_map[a], self.kernel_map[b])
                {
                    return false;
                }
            }
        }
        // φ(w₀ k w₀^{-1}) = φ(w₀) φ(k) φ(w₀)^{-1}
        for k in 0..n {
            let lhs = (self.kernel_map[source.theta_pow(k, 1)], 0);
            let rhs = target.mul(
                target.mul(self.w0_image, (self.kernel_map[k], 0)),
                target.inv(self.w0_image),
            );
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    pub fn is_surjective(&self, target: &WeilLevelGroup) -> bool {
        if self.w0_image.1.abs() != 1 {
            return false;
        }
        let mut seen = vec![false; target.kernel.order()];
        for &v in &self.kernel_map {
            seen[v] = true;
        }
        seen.iter().all(|&b| b)
    }

    pub fn is_injective_on_kernel(&self) -> bool {
        let mut seen = vec![false; self.kernel_map.len().max(self.kernel_map.iter().max().map_or(0, |m| m + 1))];
        self.kernel_map.iter().all(|&v| {
            let fresh = !seen[v];
            seen[v] = true;
            fresh
        })
    }

    pub fn is_bijective(&self, target: &WeilLevelGroup) -> bool {
        self.is_surjective(target)
            && self.kernel_map.len() == target.kernel.order()
            && self.is_injective_on_kernel()
    }

    /// Composite homomorphism: first `self`, then `next` (into `target`).
    pub fn then(&self, next: &SplitHom, target: &WeilLevelGroup) -> SplitHom {
        let kernel_map = self
            .kernel_map
            .iter()
            .map(|&k| next.kernel_map[k])
            .collect();
        SplitHom {
            kernel_map,
            w0_image: next.apply(target, self.w0_image),
        }
    }

    /// Kernel of the homomorphism, as source kernel indices (the
    /// Frobenius part of the image is faithful, so the kernel is finite).
    pub fn hom_kernel(&self, source: &WeilLevelGroup, target: &WeilLevelGroup) -> Vec<usize> {
        source
            .kernel
            .elements()
            .filter(|&k| self.apply(target, (k, 0)) == target.identity())
            .collect()
    }
}

/// A map of Galois G-sets over a group homomorphism, intertwining
/// the Frobenii up to a declared degree: f(Φ_X(p)) = Φ_Y^degree(f(p)).
/// Degree 1 is an ordinary morphism; degree m arises from base change.
#[derive(Clone, Debug)]
pub struct Morphism {
    pub source: GaloisGSet,
    pub target: GaloisGSet,
    pub alpha: GroupHom,
    map: Vec<usize>,
    pub frob_degree: i64,
}

impl Morphism {
    pub fn new(
        source: GaloisGSet,
        target: GaloisGSet,
        alpha: GroupHom,
        map: Vec<usize>,
        frob_degree: i64,
    ) -> Result<Morphism, ArithError> {
        if frob_degree < 1 {
            return Err(ArithError::ZeroExtensionDegree);
        }
        if source.base.p != target.base.p || source.base.kind != target.base.kind {
            return Err(ArithError::BaseMismatch);
        }
        if map.len() != source.size() {
            return Err(ArithError::PointOutOfRange { point: map.len(), size: source.size() });
        }
        for &v in &map {
            if v >= target.size() {
                return Err(ArithError::PointOutOfRange { point: v, size: target.size() });
            }
        }
        for p in 0..source.size() {
            for g in source.group.elements() {
                if map[source.act(p, g)] != target.act(map[p], alpha.apply(g)) {
                    return Err(ArithError::MapNotEquivariant { point: p, g });
                }
            }
            if map[source.frob(p, 1)] != target.frob(map[p], frob_degree) {
                return Err(ArithError::MapNotFrobeniusCompatible { point: p });
            }
        }
        // inertia compatibility: same inertia group acting compatibly
        let siq = source.inertia_group();
        let tiq = target.inertia_group();
        if siq.order() == tiq.order() {
            for p in 0..source.size() {
                for q in siq.elements() {
                    if map[source.inertia_act(p, q)] != target.inertia_act(map[p], q) {
                        return Err(ArithError::MapNotInertiaCompatible { point: p, q });
                    }
                }
            }
        } else if siq.order() != 1 && tiq.order() != 1 {
            return Err(ArithError::BaseMismatch);
        }
        Ok(Morphism { source, target, alpha, map, frob_degree })
    }

    pub fn identity(x: &GaloisGSet) -> Morphism {
        Morphism {
            source: x.clone(),
            target: x.clone(),
            alpha: GroupHom::identity(&x.group),
            map: (0..x.size()).collect(),
            frob_degree: 1,
        }
    }

    pub fn apply(&self, p: usize) -> usize {
        self.map[p]
    }

    pub fn map_table(&self) -> &[usize] {
        &self.map
    }
}

/// The induced homomorphism of split stabilizers W(x̄) → W(ȳ) for a
/// morphism carrying x̄ to ȳ.
pub fn point_hom(
    f: &Morphism,
    xbar: usize,
    wx: &WeilLevelGroup,
    ex: &WeilEmbedding,
    wy: &WeilLevelGroup,
    ey: &WeilEmbedding,
) -> Result<SplitHom, ArithError> {
    // kernel: (g, q) at x̄ maps to (α(g), q) at ȳ, in degree 0
    let mut kernel_map = Vec::with_capacity(ex.kernel_pairs.len());
    for &(g, q) in &ex.kernel_pairs {
        let tg = f.alpha.apply(g);
        let idx = ey
            .kernel_pairs
            .binary_search(&(tg, q))
            .map_err(|_| ArithError::MapNotEquivariant { point: xbar, g })?;
        kernel_map.push(idx);
    }
    // w₀ of x maps to a degree frob_degree·n₀(x) element of W(ȳ)
    let target_degree = f.frob_degree * wx.frob_step;
    debug_assert_eq!(target_degree % wy.frob_step, 0);
    let jy = target_degree / wy.frob_step;
    // peel off w₀(y)^jy to land in the kernel of y
    let (g0x, q0x) = ex.w0_pair;
    let image_triple = (f.alpha.apply(g0x), q0x, target_degree);
    let w0y = (ey.w0_pair.0, ey.w0_pair.1, wy.frob_step);
    let mut peel = image_triple;
    let w0y_inv = f.target.triple_inv(w0y);
    for _ in 0..jy.unsigned_abs() {
        peel = f.target.triple_mul(peel, if jy >= 0 { w0y_inv } else { w0y });
    }
    debug_assert_eq!(peel.2, 0);
    let k_idx = ey
        .kernel_pairs
        .binary_search(&(peel.0, peel.1))
        .map_err(|_| ArithError::MapNotFrobeniusCompatible { point: xbar })?;
    Ok(SplitHom { kernel_map, w0_image: (k_idx, jy) })
}

/// The image of the stabilizer after base change to the degree-m
/// extension: elements whose Frobenius degree is divisible by m.
/// Returns the subgroup (in split form), the inclusion, and its index.
pub fn base_change_image(
    w: &WeilLevelGroup,
    m: i64,
) -> Result<(WeilLevelGroup, SplitHom, i64), ArithError> {
    if m < 1 {
        return Err(ArithError::ZeroExtensionDegree);
    }
    // j·n₀ ≡ 0 (mod m)  ⇔  t | j  with  t = m / gcd(n₀, m)
    let t = m / w.frob_step.gcd(&m);
    let theta_t: Vec<usize> = w
        .kernel
        .elements()
        .map(|k| w.theta_pow(k, t))
        .collect();
    let sub = WeilLevelGroup::new(
        w.kernel.clone(),
        theta_t,
        w.frob_step * t,
        w.inertia.clone(),
        w.base,
    )?;
    let inclusion = SplitHom {
        kernel_map: w.kernel.elements().collect(),
        w0_image: (w.kernel.identity(), t),
    };
    Ok((sub, inclusion, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finite_base() -> BaseField {
        BaseField::new(5, 1, FieldKind::Finite).unwrap()
    }

    fn simple_set(
        group: FiniteGroup,
        action: Vec<Vec<usize>>,
        frobenius: Vec<usize>,
    ) -> GaloisGSet {
        let size = frobenius.len();
        GaloisGSet::new(group, size, action, frobenius, None, finite_base()).unwrap()
    }

    #[test]
    fn base_field_rejects_composite_prime() {
        assert!(BaseField::new(6, 1, FieldKind::Finite).is_err());
        assert!(BaseField::new(2, 0, FieldKind::Finite).is_err());
        assert_eq!(BaseField::new(3, 2, FieldKind::Finite).unwrap().q(), 9);
    }

    #[test]
    fn frobenius_must_commute_with_group() {
        let c2 = FiniteGroup::cyclic(2);
        // 3 points: g swaps 0,1 and fixes 2; frobenius swaps 1,2 — not equivariant
        let action = vec![vec![0, 1], vec![1, 0], vec![2, 2]];
        let err = GaloisGSet::new(c2, 3, action, vec![0, 2, 1], None, finite_base());
        assert!(matches!(err, Err(ArithError::FrobeniusNotEquivariant { .. })));
    }

    #[test]
    fn closed_points_single_cycle_trivial_group() {
        let triv = FiniteGroup::trivial();
        let x = simple_set(triv, vec![vec![0], vec![1], vec![2]], vec![1, 2, 0]);
        let pts = points_of(&x);
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].degree, 3);
        assert_eq!(pts[0].decomposition.len(), 1);
    }

    #[test]
    fn closed_points_two_swapped_by_both() {
        let c2 = FiniteGroup::cyclic(2);
        let action = vec![vec![0, 1], vec![1, 0]];
        let x = simple_set(c2, action, vec![1, 0]);
        let pts = points_of(&x);
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].degree, 2);
        assert_eq!(pts[0].decomposition.len(), 2);
    }

    #[test]
    fn closed_points_two_fixed_points_exchanged_by_group() {
        let c2 = FiniteGroup::cyclic(2);
        let action = vec![vec![0, 1], vec![1, 0]];
        let x = simple_set(c2, action, vec![0, 1]);
        let pts = points_of(&x);
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].degree, 1);
        // G_d(x) is trivial: the generator moves the basepoint's orbit
        assert_eq!(pts[0].decomposition, vec![0]);
    }

    #[test]
    fn weil_group_trivial_case() {
        let triv = FiniteGroup::trivial();
        let x = simple_set(triv, vec![vec![0]], vec![0]);
        let (w, _) = weil_group_at(&x, 0).unwrap();
        assert_eq!(w.kernel.order(), 1);
        assert_eq!(w.frob_step, 1);
    }

    #[test]
    fn weil_group_swap_matched_by_group() {
        let c2 = FiniteGroup::cyclic(2);
        let x = simple_set(c2, vec![vec![0, 1], vec![1, 0]], vec![1, 0]);
        let (w, e) = weil_group_at(&x, 0).unwrap();
        assert_eq!(w.kernel.order(), 1);
        assert_eq!(w.frob_step, 1);
        assert_eq!(e.w0_pair.0, 1); // the swap element is the Frobenius lift
    }

    #[test]
    fn weil_group_swap_with_trivial_group() {
        let triv = FiniteGroup::trivial();
        let x = simple_set(triv, vec![vec![0], vec![1]], vec![1, 0]);
        let (w, _) = weil_group_at(&x, 0).unwrap();
        assert_eq!(w.kernel.order(), 1);
        assert_eq!(w.frob_step, 2);
    }

    #[test]
    fn split_form_reconstructs_membership() {
        // a mildly nontrivial case: regular C4-set with frobenius = action of 2
        let c4 = FiniteGroup::cyclic(4);
        let action: Vec<Vec<usize>> =
            (0..4).map(|p| (0..4).map(|g| (p + g) % 4).collect()).collect();
        let frobenius: Vec<usize> = (0..4).map(|p| (p + 2) % 4).collect();
        let x = simple_set(c4, action, frobenius);
        let bound = 3 * x.size() as i64;
        for xbar in 0..x.size() {
            let (w, e) = weil_group_at(&x, xbar).unwrap();
            for k in w.kernel.elements() {
                for j in -bound..=bound {
                    let t = e.realize(&x, &w, (k, j));
                    assert!(x.stabilizes(xbar, t.0, t.1, t.2), "xbar={xbar} k={k} j={j}");
                }
            }
            // conversely, every stabilizing triple in the scan window is hit
            for g in x.group.elements() {
                for m in -bound..=bound {
                    if x.stabilizes(xbar, g, 0, m) {
                        assert_eq!(m.rem_euclid(w.frob_step) , 0);
                        let j = m / w.frob_step;
                        let found = w.kernel.elements().any(|k| {
                            let t = e.realize(&x, &w, (k, j));
                            (t.0, t.2) == (g, m)
                        });
                        assert!(found, "missing triple g={g} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn point_hom_identity_and_grading() {
        let c2 = FiniteGroup::cyclic(2);
        let x = simple_set(c2, vec![vec![0, 1], vec![1, 0]], vec![1, 0]);
        let f = Morphism::identity(&x);
        let (w, e) = weil_group_at(&x, 0).unwrap();
        let h = point_hom(&f, 0, &w, &e, &w, &e).unwrap();
        assert!(h.validate(&w, &w));
        assert!(h.is_bijective(&w));
        for k in w.kernel.elements() {
            for j in -4..=4 {
                let img = h.apply(&w, (k, j));
                assert_eq!(w.grade(img), w.grade((k, j)));
            }
        }
    }

    #[test]
    fn point_hom_torsor_is_bijective() {
        // free C2 action on 2 points over 1 point, trivial frobenius
        let c2 = FiniteGroup::cyclic(2);
        let triv = FiniteGroup::trivial();
        let x = simple_set(c2.clone(), vec![vec![0, 1], vec![1, 0]], vec![0, 1]);
        let y = simple_set(triv.clone(), vec![vec![0]], vec![0]);
        let alpha = GroupHom::new(c2, triv, vec![0, 0]).unwrap();
        let f = Morphism::new(x.clone(), y.clone(), alpha, vec![0, 0], 1).unwrap();
        let (wx, ex) = weil_group_at(&x, 0).unwrap();
        let (wy, ey) = weil_group_at(&y, 0).unwrap();
        let h = point_hom(&f, 0, &wx, &ex, &wy, &ey).unwrap();
        assert!(h.validate(&wx, &wy));
        assert!(h.is_bijective(&wy));
    }

    #[test]
    fn point_hom_quotient_is_surjective_with_kernel() {
        // C2 acting trivially on one point, quotient to the trivial group
        let c2 = FiniteGroup::cyclic(2);
        let triv = FiniteGroup::trivial();
        let x = simple_set(c2.clone(), vec![vec![0, 0]], vec![0]);
        let y = simple_set(triv.clone(), vec![vec![0]], vec![0]);
        let alpha = GroupHom::new(c2, triv, vec![0, 0]).unwrap();
        let f = Morphism::new(x.clone(), y.clone(), alpha, vec![0], 1).unwrap();
        let (wx, ex) = weil_group_at(&x, 0).unwrap();
        let (wy, ey) = weil_group_at(&y, 0).unwrap();
        let h = point_hom(&f, 0, &wx, &ex, &wy, &ey).unwrap();
        assert!(h.validate(&wx, &wy));
        assert!(h.is_surjective(&wy));
        assert_eq!(h.hom_kernel(&wx, &wy).len(), 2);
    }

    #[test]
    fn base_change_image_examples() {
        let base = finite_base();
        // W ≅ ℤ
        let w = WeilLevelGroup::new(FiniteGroup::trivial(), vec![0], 1, vec![0], base).unwrap();
        let (sub, incl, t) = base_change_image(&w, 1).unwrap();
        assert_eq!(t, 1);
        assert_eq!(sub.frob_step, 1);
        assert!(incl.validate(&sub, &w));
        let (sub, _, t) = base_change_image(&w, 3).unwrap();
        assert_eq!(t, 3);
        assert_eq!(sub.frob_step, 3);
        // K = C2, theta = id, n0 = 1, m = 2 -> index 2
        let c2 = FiniteGroup::cyclic(2);
        let w = WeilLevelGroup::new(c2, vec![0, 1], 1, vec![0], base).unwrap();
        let (sub, incl, t) = base_change_image(&w, 2).unwrap();
        assert_eq!(t, 2);
        assert_eq!(sub.kernel.order(), 2);
        assert!(incl.validate(&sub, &w));
        // index divides m across a sweep
        for n0 in 1..=4i64 {
            let w = WeilLevelGroup::new(
                FiniteGroup::cyclic(3),
                vec![0, 2, 1],
                n0,
                vec![0],
                base,
            );
            // theta of order 2 on C3 is a valid automorphism
            let w = w.unwrap();
            for m in 1..=6i64 {
                let (_, _, t) = base_change_image(&w, m).unwrap();
                assert_eq!(m % t, 0, "index {t} must divide m={m}");
                if m % n0 == 0 {
                    // every achievable degree n0·j covers m·ℤ exactly when... the
                    // subgroup is proper unless m | n0
                }
                if n0 % m == 0 {
                    assert_eq!(t, 1, "whole group when m divides n0");
                }
            }
        }
    }

    #[test]
    fn local_set_with_inertia_validates() {
        // 2 points swapped by inertia C2, fixed by frobenius, trivial G
        let triv = FiniteGroup::trivial();
        let base = BaseField::new(3, 1, FieldKind::Local).unwrap();
        let inertia = InertiaData {
            group: FiniteGroup::cyclic(2),
            action: vec![vec![0, 1], vec![1, 0]],
            frob_twist: vec![0, 1],
        };
        let x = GaloisGSet::new(
            triv,
            2,
            vec![vec![0], vec![1]],
            vec![0, 1],
            Some(inertia),
            base,
        )
        .unwrap();
        let pts = points_of(&x);
        assert_eq!(pts.len(), 1, "inertia orbit is one closed point");
        let (w, _) = weil_group_at(&x, 0).unwrap();
        assert_eq!(w.kernel.order(), 1, "no pair (g,q) fixes the basepoint except identity");
        // inertia marker: kernel elements with trivial G part
        assert_eq!(w.inertia.len(), 1);
        // now let inertia fix the points: kernel gets the full inertia group
        let inertia = InertiaData {
            group: FiniteGroup::cyclic(2),
            action: vec![vec![0, 0], vec![1, 1]],
            frob_twist: vec![0, 1],
        };
        let base2 = BaseField::new(3, 1, FieldKind::Local).unwrap();
        let x2 = GaloisGSet::new(
            FiniteGroup::trivial(),
            2,
            vec![vec![0], vec![1]],
            vec![0, 1],
            Some(inertia),
            base2,
        )
        .unwrap();
        let (w2, _) = weil_group_at(&x2, 0).unwrap();
        assert_eq!(w2.kernel.order(), 2);
        assert_eq!(w2.inertia.len(), 2);
    }

    #[test]
    fn inertia_rejected_on_finite_base() {
        let inertia = InertiaData {
            group: FiniteGroup::cyclic(2),
            action: vec![vec![0, 1], vec![1, 0]],
            frob_twist: vec![0, 1],
        };
        let err = GaloisGSet::new(
            FiniteGroup::trivial(),
            2,
            vec![vec![0], vec![1]],
            vec![0, 1],
            Some(inertia),
            finite_base(),
        );
        assert_eq!(err.unwrap_err(), ArithError::InertiaOnFiniteBase);
    }

    #[test]
    fn connect_finds_transport_within_closed_point() {
        let c2 = FiniteGroup::cyclic(2);
        let x = simple_set(c2, vec![vec![0, 1], vec![1, 0]], vec![1, 0]);
        let (g, q, m) = x.connect(0, 1).unwrap();
        assert_eq!(x.galois_act(x.act(0, g), q, m), 1);
        // two separate fixed points with trivial group: not connected
        let triv = FiniteGroup::trivial();
        let y = simple_set(triv, vec![vec![0], vec![1]], vec![0, 1]);
        assert!(y.connect(0, 1).is_none());
    }

    fn local_regular_inertia() -> GaloisGSet {
        // inertia C3 acting regularly on 3 points, frobenius twisting by inversion
        let base = BaseField::new(5, 1, FieldKind::Local).unwrap();
        let c3 = FiniteGroup::cyclic(3);
        let action: Vec<Vec<usize>> =
            (0..3).map(|p| (0..3).map(|q| (p + q) % 3).collect()).collect();
        let inertia = InertiaData {
            group: c3,
            action,
            frob_twist: vec![0, 2, 1],
        };
        GaloisGSet::new(
            FiniteGroup::trivial(),
            3,
            vec![vec![0], vec![1], vec![2]],
            vec![0, 2, 1],
            Some(inertia),
            base,
        )
        .unwrap()
    }

    #[test]
    fn path_action_composes_and_inverts() {
        let x = local_regular_inertia();
        let iq = x.inertia_group();
        let mut triples = Vec::new();
        for g in x.group.elements() {
            for q in iq.elements() {
                for m in -3..=3i64 {
                    triples.push((g, q, m));
                }
            }
        }
        for &a in &triples {
            for &b in &triples {
                let ab = x.path_mul(a, b);
                for p in 0..x.size() {
                    assert_eq!(x.path_act(x.path_act(p, a), b), x.path_act(p, ab));
                }
            }
            let inv = x.path_inv(a);
            let e = x.path_mul(a, inv);
            for p in 0..x.size() {
                assert_eq!(x.path_act(p, e), p);
            }
        }
    }

    #[test]
    fn loop_conversion_and_transport() {
        let x = local_regular_inertia();
        let iq = x.inertia_group();
        // stabilizer triples of the basepoint fix it as loops
        for g in x.group.elements() {
            for q in iq.elements() {
                for m in -3..=3i64 {
                    let s = (g, q, m);
                    assert_eq!(x.stab_of_loop(x.loop_of_stab(s)), s);
                    if x.stabilizes(0, g, q, m) {
                        assert_eq!(x.path_act(0, x.loop_of_stab(s)), 0);
                        // transport along a path lands in the stabilizer there
                        for to in 0..x.size() {
                            let t = x.connect_path(0, to).unwrap();
                            // s stabilizes path_act(0, t)? transport the other way:
                            // take stabilizers at `to` and carry them to 0
                            let s_to = {
                                // conjugate the loop from 0 out to `to`
                                let l =
                                    x.path_mul(x.path_mul(x.path_inv(t), x.loop_of_stab(s)), t);
                                x.stab_of_loop(l)
                            };
                            assert!(x.stabilizes(to, s_to.0, s_to.1, s_to.2));
                            let back = x.transport_stab(t, s_to);
                            assert!(x.stabilizes(0, back.0, back.1, back.2));
                            assert_eq!(back, s);
                        }
                    }
                }
            }
        }
        // stabilizer triples compose under the declared product
        let mut stabs = Vec::new();
        for g in x.group.elements() {
            for q in iq.elements() {
                for m in -2..=2i64 {
                    if x.stabilizes(0, g, q, m) {
                        stabs.push((g, q, m));
                    }
                }
            }
        }
        for &a in &stabs {
            for &b in &stabs {
                let ab = x.triple_mul(a, b);
                assert!(x.stabilizes(0, ab.0, ab.1, ab.2));
            }
        }
    }

    #[test]
    fn split_of_inverts_realize() {
        let c4 = FiniteGroup::cyclic(4);
        let action: Vec<Vec<usize>> =
            (0..4).map(|p| (0..4).map(|g| (p + g) % 4).collect()).collect();
        let frobenius: Vec<usize> = (0..4).map(|p| (p + 2) % 4).collect();
        let x = simple_set(c4, action, frobenius);
        let (w, e) = weil_group_at(&x, 0).unwrap();
        for k in w.kernel.elements() {
            for j in -4..=4i64 {
                let t = e.realize(&x, &w, (k, j));
                assert_eq!(e.split_of(&x, &w, t), Some((k, j)));
            }
        }
        // a triple of indivisible degree is rejected
        if w.frob_step > 1 {
            let probe = (0usize, 0usize, 1i64);
            assert_eq!(e.split_of(&x, &w, probe), None);
        }
    }

    #[test]
    fn split_hom_composition() {
        let base = finite_base();
        let c2 = FiniteGroup::cyclic(2);
        let w = WeilLevelGroup::new(c2, vec![0, 1], 1, vec![0], base).unwrap();
        let (sub, incl, _) = base_change_image(&w, 2).unwrap();
        let (subsub, incl2, _) = base_change_image(&sub, 4).unwrap();
        let both = incl2.then(&incl, &w);
        assert!(both.validate(&subsub, &w));
        for k in subsub.kernel.elements() {
            for j in -3..=3i64 {
                assert_eq!(
                    both.apply(&w, (k, j)),
                    incl.apply(&w, incl2.apply(&sub, (k, j)))
                );
            }
        }
    }
}
