//! Deterministic seeded generators and the property suites shared by the
//! command-line verifier and the acceptance tests.

use crate::arith::{
    points_of, weil_group_at, BaseField, FieldKind, GaloisGSet, InertiaData, Morphism,
    SplitHom, WeilLevelGroup,
};
use crate::compat::{
    check_compatibility, check_compatibility_truncated, sigma_twist_system, ClosureOp,
    CompatSystem,
};
use crate::cyclotomic::{CycloElem, CycloMatrix, FieldAut, Rat};
use crate::descent::{build_descent, descent_criterion, scholie_check_with, untwist};
use crate::groups::{double_cosets, FiniteGroup, GroupHom};
use crate::sheaves::{
    adjunction_check, classes_equal, coinduced_rep_plain, dual, inertia_invariants_class,
    mackey_decompose, mackey_summand, pushforward, tate_twist, EquivariantSheaf, VirtualClass,
    WeilRep,
};
use num_bigint::BigInt;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Outcome of one property suite: how many cases ran and which failed.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &'static str) -> SuiteOutcome {
        SuiteOutcome { name, cases: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn case(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(detail());
        }
    }
}

pub fn group_catalog() -> Vec<(&'static str, FiniteGroup)> {
    let d4 = FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0], vec![3, 2, 1, 0]]).unwrap();
    vec![
        ("c1", FiniteGroup::trivial()),
        ("c2", FiniteGroup::cyclic(2)),
        ("c3", FiniteGroup::cyclic(3)),
        ("c4", FiniteGroup::cyclic(4)),
        ("c5", FiniteGroup::cyclic(5)),
        ("c6", FiniteGroup::cyclic(6)),
        ("c8", FiniteGroup::cyclic(8)),
        ("c12", FiniteGroup::cyclic(12)),
        ("s3", FiniteGroup::symmetric(3)),
        ("d4", d4),
    ]
}

/// A small generating set found greedily.
pub fn generating_set(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = vec![g.identity()];
    for x in g.elements() {
        if span.binary_search(&x).is_ok() {
            continue;
        }
        gens.push(x);
        span = g.subgroup_generated(&gens);
        if span.len() == g.order() {
            break;
        }
    }
    gens
}

/// All characters of the group with values in the given cyclotomic level,
/// as exponent vectors indexed by group element.
pub fn character_exponents(g: &FiniteGroup, n: u64) -> Vec<Vec<i64>> {
    let gens = generating_set(g);
    let n = n as i64;
    let k = gens.len();
    let total = (n as usize).pow(k as u32);
    let mut out = Vec::new();
    'outer: for code in 0..total {
        let mut assign = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            assign.push((c % n as usize) as i64);
            c /= n as usize;
        }
        let mut label: Vec<Option<i64>> = vec![None; g.order()];
        label[g.identity()] = Some(0);
        let mut stack = vec![g.identity()];
        while let Some(x) = stack.pop() {
            let lx = label[x].unwrap();
            for (gi, &gen) in gens.iter().enumerate() {
                let y = g.mul(x, gen);
                let ly = (lx + assign[gi]).rem_euclid(n);
                match label[y] {
                    None => {
                        label[y] = Some(ly);
                        stack.push(y);
                    }
                    Some(prev) => {
                        if prev != ly {
                            continue 'outer;
                        }
                    }
                }
            }
        }
        out.push(label.into_iter().map(|v| v.unwrap()).collect());
    }
    out
}

fn character_matrices(
    g: &FiniteGroup,
    conductor: u64,
    expo: &[i64],
) -> Vec<CycloMatrix> {
    g.elements()
        .map(|x| {
            CycloMatrix::new(
                conductor,
                1,
                1,
                vec![CycloElem::root_of_unity(conductor, expo[x]).unwrap()],
            )
            .unwrap()
        })
        .collect()
}

fn permutation_matrices(g: &FiniteGroup, conductor: u64, sub: &[usize]) -> Vec<CycloMatrix> {
    let space = crate::groups::RightGSet::coset_space(g, sub).unwrap();
    let n = space.size();
    g.elements()
        .map(|x| {
            let mut m = CycloMatrix::zero(conductor, n, n).unwrap();
            for c in 0..n {
                m.set(space.act(c, x), c, CycloElem::one(conductor).unwrap());
            }
            m
        })
        .collect()
}

fn direct_sum_reps(a: Vec<CycloMatrix>, b: &[CycloMatrix]) -> Vec<CycloMatrix> {
    a.into_iter()
        .zip(b)
        .map(|(x, y)| x.direct_sum(y).unwrap())
        .collect()
}

/// A random representation of a plain finite group: a direct sum of
/// characters and coset-permutation blocks within the rank budget.
pub fn random_plain_rep(
    rng: &mut ChaCha8Rng,
    g: &FiniteGroup,
    conductor: u64,
    max_rank: usize,
) -> Vec<CycloMatrix> {
    let chars = character_exponents(g, conductor);
    let perm_subs: Vec<Vec<usize>> = g
        .all_subgroups()
        .into_iter()
        .filter(|s| {
            let index = g.order() / s.len();
            index >= 2 && index <= max_rank
        })
        .collect();
    let mut rep: Vec<CycloMatrix> = g
        .elements()
        .map(|_| CycloMatrix::zero(conductor, 0, 0).unwrap())
        .collect();
    let mut rank = 0usize;
    let target = rng.gen_range(1..=max_rank);
    while rank < target {
        let remaining = target - rank;
        let use_perm = !perm_subs.is_empty() && remaining >= 2 && rng.gen_bool(0.4);
        let block = if use_perm {
            let candidates: Vec<&Vec<usize>> = perm_subs
                .iter()
                .filter(|s| g.order() / s.len() <= remaining)
                .collect();
            if candidates.is_empty() {
                let expo = chars.choose(rng).unwrap();
                character_matrices(g, conductor, expo)
            } else {
                permutation_matrices(g, conductor, candidates.choose(rng).unwrap())
            }
        } else {
            let expo = chars.choose(rng).unwrap();
            character_matrices(g, conductor, expo)
        };
        rank += block[0].rows();
        rep = direct_sum_reps(rep, &block);
    }
    rep
}

pub fn finite_base() -> BaseField {
    BaseField::new(5, 1, FieldKind::Finite).unwrap()
}

pub fn point_with_group(g: FiniteGroup) -> GaloisGSet {
    let n = g.order();
    GaloisGSet::new(g, 1, vec![vec![0; n]], vec![0], None, finite_base()).unwrap()
}

pub fn single_point() -> GaloisGSet {
    point_with_group(FiniteGroup::trivial())
}

pub fn free_gset(g: &FiniteGroup) -> GaloisGSet {
    // regular action with identity Frobenius
    let n = g.order();
    let action: Vec<Vec<usize>> = (0..n).map(|p| (0..n).map(|x| g.mul(p, x)).collect()).collect();
    GaloisGSet::new(g.clone(), n, action, (0..n).collect(), None, finite_base()).unwrap()
}

pub fn swap_point() -> GaloisGSet {
    GaloisGSet::new(
        FiniteGroup::trivial(),
        2,
        vec![vec![0], vec![1]],
        vec![1, 0],
        None,
        finite_base(),
    )
    .unwrap()
}

pub fn local_point(inertia_order: usize) -> GaloisGSet {
    let base = BaseField::new(5, 1, FieldKind::Local).unwrap();
    let iq = FiniteGroup::cyclic(inertia_order);
    let inertia = InertiaData {
        group: iq.clone(),
        action: vec![vec![0; inertia_order]],
        frob_twist: iq.elements().collect(),
    };
    GaloisGSet::new(FiniteGroup::trivial(), 1, vec![vec![0]], vec![0], Some(inertia), base)
        .unwrap()
}

pub fn quotient_to_point(src: &GaloisGSet) -> Morphism {
    let alpha = GroupHom::new(
        src.group.clone(),
        FiniteGroup::trivial(),
        vec![0; src.group.order()],
    )
    .unwrap();
    Morphism::new(src.clone(), single_point(), alpha, vec![0; src.size()], 1).unwrap()
}

/// A catalog quotient morphism together with whether the action is free.
pub struct QuotientCase {
    pub name: &'static str,
    pub f: Morphism,
    pub free: bool,
}

pub fn quotient_cases() -> Vec<QuotientCase> {
    let mut out = Vec::new();
    for (name, g, free) in [
        ("c2 fixed point", point_with_group(FiniteGroup::cyclic(2)), false),
        ("c3 fixed point", point_with_group(FiniteGroup::cyclic(3)), false),
        ("c4 fixed point", point_with_group(FiniteGroup::cyclic(4)), false),
        ("c2 free", free_gset(&FiniteGroup::cyclic(2)), true),
        ("c3 free", free_gset(&FiniteGroup::cyclic(3)), true),
        ("s3 free", free_gset(&FiniteGroup::symmetric(3)), true),
    ] {
        out.push(QuotientCase { name, f: quotient_to_point(&g), free });
    }
    out
}

pub fn regular_sheaf(x: &GaloisGSet, conductor: u64) -> EquivariantSheaf {
    let one = CycloElem::one(conductor).unwrap();
    let stalks = points_of(x)
        .into_iter()
        .map(|pd| WeilRep::regular(pd.group, conductor, &one).unwrap())
        .collect();
    EquivariantSheaf::new(x.clone(), conductor, stalks).unwrap()
}

/// A rank-1 sheaf with the given kernel-character exponents and Frobenius
/// scalar at every closed point.
pub fn character_sheaf(
    x: &GaloisGSet,
    conductor: u64,
    char_index: usize,
    frob: &CycloElem,
) -> Option<EquivariantSheaf> {
    let mut stalks = Vec::new();
    for pd in points_of(x) {
        let w = &pd.group;
        let all = character_exponents(&w.kernel, conductor);
        let valid: Vec<&Vec<i64>> = all
            .iter()
            .filter(|e| w.kernel.elements().all(|k| e[w.theta_pow(k, 1)] == e[k]))
            .collect();
        let expo = valid.get(char_index % valid.len().max(1))?;
        let chi: Vec<CycloElem> = w
            .kernel
            .elements()
            .map(|k| CycloElem::root_of_unity(conductor, expo[k]).unwrap())
            .collect();
        stalks.push(WeilRep::character(w.clone(), conductor, &chi, frob).ok()?);
    }
    EquivariantSheaf::new(x.clone(), conductor, stalks).ok()
}

/// The catalog of test sheaves on finite bases.
pub fn sheaf_catalog(conductor: u64) -> Vec<(String, EquivariantSheaf)> {
    let mut out = Vec::new();
    let bases: Vec<(&str, GaloisGSet)> = vec![
        ("pt", single_point()),
        ("c2pt", point_with_group(FiniteGroup::cyclic(2))),
        ("c3pt", point_with_group(FiniteGroup::cyclic(3))),
        ("c2free", free_gset(&FiniteGroup::cyclic(2))),
        ("swap2", swap_point()),
    ];
    for (name, x) in &bases {
        out.push((format!("unit on {name}"), EquivariantSheaf::constant_unit(x.clone(), conductor).unwrap()));
        out.push((format!("regular on {name}"), regular_sheaf(x, conductor)));
        if let Some(s) = character_sheaf(
            x,
            conductor,
            1,
            &CycloElem::from_integer(conductor, 2).unwrap(),
        ) {
            out.push((format!("character on {name}"), s));
        }
    }
    out
}

/// A random rank-bounded stalk over a stabilizer group: a direct sum of
/// theta-fixed kernel characters with random invertible Frobenius scalars.
pub fn random_stalk(
    rng: &mut ChaCha8Rng,
    w: &WeilLevelGroup,
    conductor: u64,
    max_rank: usize,
) -> WeilRep {
    let all = character_exponents(&w.kernel, conductor);
    let valid: Vec<Vec<i64>> = all
        .into_iter()
        .filter(|e| w.kernel.elements().all(|k| e[w.theta_pow(k, 1)] == e[k]))
        .collect();
    let rank = rng.gen_range(1..=max_rank);
    let mut acc = WeilRep::zero(w.clone(), conductor).unwrap();
    for _ in 0..rank {
        let expo = valid.choose(rng).unwrap();
        let chi: Vec<CycloElem> = w
            .kernel
            .elements()
            .map(|k| CycloElem::root_of_unity(conductor, expo[k]).unwrap())
            .collect();
        let scalar = CycloElem::root_of_unity(conductor, rng.gen_range(0..conductor as i64))
            .unwrap()
            .scale(&Rat::new(BigInt::from(rng.gen_range(1..=3)), BigInt::from(1)));
        let block = WeilRep::character(w.clone(), conductor, &chi, &scalar).unwrap();
        acc = acc.direct_sum(&block).unwrap();
    }
    acc
}

/// A random single-stalk virtual class on the given base.
pub fn random_class(
    rng: &mut ChaCha8Rng,
    x: &GaloisGSet,
    conductor: u64,
    max_rank: usize,
) -> VirtualClass {
    let stalks: Vec<WeilRep> = points_of(x)
        .into_iter()
        .map(|pd| random_stalk(rng, &pd.group, conductor, max_rank))
        .collect();
    VirtualClass::from_sheaf(EquivariantSheaf::new(x.clone(), conductor, stalks).unwrap())
}

/// Scale every Frobenius block of every stalk by an integer, producing an
/// object whose traces disagree with the original at j ≠ 0.
pub fn perturb_class(v: &VirtualClass, factor: i64) -> VirtualClass {
    let scale = Rat::new(BigInt::from(factor), BigInt::from(1));
    let remap = |sh: &EquivariantSheaf| {
        sh.map_stalks(|st| {
            let rho: Vec<CycloMatrix> =
                st.group.kernel.elements().map(|k| st.rho(k).clone()).collect();
            WeilRep::new(st.group.clone(), st.conductor, rho, st.frob().scale_rat(&scale))
        })
        .unwrap()
    };
    VirtualClass::new(
        v.base.clone(),
        v.conductor,
        v.plus.iter().map(&remap).collect(),
        v.minus.iter().map(&remap).collect(),
    )
    .unwrap()
}

/// A seeded two-index system; incompatible ones perturb the second object.
pub fn random_system(
    rng: &mut ChaCha8Rng,
    x: &GaloisGSet,
    conductor: u64,
    incompatible: bool,
) -> CompatSystem {
    let v = random_class(rng, x, conductor, 2);
    let unit_exps: Vec<u64> = (1..conductor.max(2))
        .filter(|e| num_integer::gcd(*e, conductor.max(2)) == 1)
        .collect();
    let e = *unit_exps.choose(rng).unwrap_or(&1);
    let sigmas = vec![
        FieldAut::identity(conductor).unwrap(),
        FieldAut::new(conductor, e).unwrap(),
    ];
    let mut s = sigma_twist_system(&v, &sigmas).unwrap();
    if incompatible {
        s.objects[1] = perturb_class(&s.objects[1], 2);
    }
    s
}

// ---------------------------------------------------------------------
// Property suites
// ---------------------------------------------------------------------

/// Criterion: the weighted trace identity for plain coinduction holds for
/// every catalog homomorphism and random representations.
pub fn suite_coinduction_oracle(seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("coinduction trace oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut homs: Vec<(String, GroupHom)> = Vec::new();
    for (name, g) in group_catalog() {
        if g.order() > 12 {
            continue;
        }
        for (i, sub) in g.all_subgroups().into_iter().enumerate() {
            homs.push((format!("{name} incl #{i}"), GroupHom::inclusion(&g, &sub).unwrap()));
        }
    }
    for n in [4usize, 6, 8, 12] {
        let cn = FiniteGroup::cyclic(n);
        for d in 2..n {
            if n % d != 0 {
                continue;
            }
            let cd = FiniteGroup::cyclic(d);
            let map: Vec<usize> = (0..n).map(|i| i % d).collect();
            homs.push((format!("c{n} -> c{d}"), GroupHom::new(cn.clone(), cd, map).unwrap()));
        }
    }
    assert!(homs.len() >= 40);
    let conductors = [1u64, 3, 4, 5, 8, 12];
    for (name, alpha) in &homs {
        for _ in 0..10 {
            let conductor = *conductors.choose(&mut rng).unwrap();
            let rho = random_plain_rep(&mut rng, &alpha.source, conductor, 3);
            let (coind, _) = coinduced_rep_plain(alpha, &rho).unwrap();
            let kernel_size = alpha.kernel().len() as i64;
            let image = alpha.image();
            let g2 = &alpha.target;
            for g in g2.elements() {
                let lhs = coind[g]
                    .trace()
                    .unwrap()
                    .scale(&Rat::new(BigInt::from(kernel_size), BigInt::from(1)));
                let mut rhs = CycloElem::zero(conductor).unwrap();
                let mut marked = vec![false; g2.order()];
                for s in g2.elements() {
                    if marked[s] {
                        continue;
                    }
                    for &i in &image {
                        marked[g2.mul(s, i)] = true;
                    }
                    let conj = g2.mul(g2.inv(s), g2.mul(g, s));
                    for t in alpha.source.elements() {
                        if alpha.apply(t) == conj {
                            rhs = rhs.checked_add(&rho[t].trace().unwrap()).unwrap();
                        }
                    }
                }
                out.case(lhs == rhs, || format!("{name}: g={g} lhs≠rhs"));
            }
        }
    }
    out
}

/// Criterion: the pulled-back pushforward equals the double-coset sum of
/// fiber-product summands, and summands ignore the representative choice.
pub fn suite_mackey(seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("mackey decomposition");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases: Vec<(FiniteGroup, Vec<usize>, Vec<usize>)> = Vec::new();
    for (_, h) in group_catalog() {
        if h.order() > 24 || h.order() < 2 {
            continue;
        }
        let subs = h.all_subgroups();
        for a in &subs {
            for b in &subs {
                cases.push((h.clone(), a.clone(), b.clone()));
            }
        }
    }
    assert!(cases.len() >= 100);
    let subgroup_morphism = |h: &FiniteGroup, elems: &[usize]| -> Morphism {
        let z = point_with_group(h.clone());
        let alpha = GroupHom::inclusion(h, elems).unwrap();
        let src = point_with_group(alpha.source.clone());
        Morphism::new(src, z, alpha, vec![0], 1).unwrap()
    };
    for (h, a, b) in &cases {
        let f = subgroup_morphism(h, a);
        let g = subgroup_morphism(h, b);
        let l = EquivariantSheaf::constant_unit(f.source.clone(), 1).unwrap();
        let (lhs, summands) = mackey_decompose(&f, &g, &l).unwrap();
        let mut sum = VirtualClass::zero_class(g.source.clone(), 1);
        for s in summands {
            sum = sum.add(&VirtualClass::from_sheaf(s)).unwrap();
        }
        out.case(classes_equal(&lhs, &sum).unwrap().is_none(), || {
            format!("group order {} |A|={} |B|={}", h.order(), a.len(), b.len())
        });
    }
    // representative independence on randomized re-choices
    for _ in 0..20 {
        let (h, a, b) = cases.choose(&mut rng).unwrap();
        let f = subgroup_morphism(h, a);
        let g = subgroup_morphism(h, b);
        let l = EquivariantSheaf::constant_unit(f.source.clone(), 1).unwrap();
        let im_a = f.alpha.image();
        let im_b = g.alpha.image();
        let reps = double_cosets(h, &im_b, &im_a).unwrap();
        let (r, _) = *reps.choose(&mut rng).unwrap();
        let r2 = h.mul(h.mul(*im_b.choose(&mut rng).unwrap(), r), *im_a.choose(&mut rng).unwrap());
        let s1 = VirtualClass::from_sheaf(mackey_summand(&f, &g, &l, r).unwrap());
        let s2 = VirtualClass::from_sheaf(mackey_summand(&f, &g, &l, r2).unwrap());
        out.case(classes_equal(&s1, &s2).unwrap().is_none(), || {
            format!("representative change {r}->{r2} in order {}", h.order())
        });
    }
    out
}

/// Criterion: units invert on all quotient cases; counits invert exactly
/// on the free-action cases.
pub fn suite_adjunction() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("adjunction unit/counit");
    for case in quotient_cases() {
        let k = EquivariantSheaf::constant_unit(single_point(), 1).unwrap();
        let l = regular_sheaf(&case.f.source, 1);
        let report = adjunction_check(&case.f, &k, &l).unwrap();
        out.case(report.quotient_ok, || format!("{}: quotient check", case.name));
        out.case(report.unit_invertible, || format!("{}: unit", case.name));
        out.case(report.counit_equivariant, || format!("{}: equivariance", case.name));
        out.case(report.free_action == case.free, || format!("{}: freeness", case.name));
        out.case(report.counit_invertible == case.free, || {
            format!("{}: counit invertibility", case.name)
        });
    }
    out
}

/// Criterion: the untwisting trace identity holds for every catalog sheaf,
/// every group element, every m ≤ 4, over the full window.
pub fn suite_scholie() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("untwisting trace identity");
    let mut catalog = sheaf_catalog(4);
    // a local entry exercising the inertia coordinate
    let x = local_point(2);
    if let Some(s) = character_sheaf(&x, 4, 1, &CycloElem::from_integer(4, 3).unwrap()) {
        catalog.push(("inertia character".to_string(), s));
    }
    for (name, l) in &catalog {
        let x = l.base().clone();
        let window = 2 * l.total_dim().max(1) as i64;
        for g in x.group.elements() {
            for m in 1..=4i64 {
                let datum = build_descent(&x, m, g).unwrap();
                let cl = untwist(&datum, l).unwrap();
                for p in 0..x.size() {
                    for q in x.inertia_group().elements() {
                        if !x.stabilizes(p, g, q, m) {
                            continue;
                        }
                        for j in -window..=window {
                            let (lhs, rhs) =
                                scholie_check_with(&datum, l, &cl, p, q, j).unwrap();
                            out.case(lhs == rhs, || {
                                format!("{name}: g={g} m={m} p={p} q={q} j={j}")
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

fn system_bases() -> Vec<GaloisGSet> {
    vec![
        point_with_group(FiniteGroup::cyclic(2)),
        point_with_group(FiniteGroup::cyclic(3)),
    ]
}

/// Criterion: the untwisting criterion verdict agrees with the direct
/// compatibility check, and incompatible verdicts carry a valid witness.
pub fn suite_descent_criterion(seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("untwisting criterion agreement");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases = system_bases();
    let mut engineered = 0usize;
    for i in 0..200 {
        let x = bases[i % bases.len()].clone();
        let conductor = [3u64, 4, 5][i % 3];
        let incompatible = i % 5 == 0;
        if incompatible {
            engineered += 1;
        }
        let s = random_system(&mut rng, &x, conductor, incompatible);
        let direct = check_compatibility(&s).unwrap();
        let via = descent_criterion(&s).unwrap();
        out.case(direct.compatible == via.compatible, || {
            format!("system {i}: direct={} criterion={}", direct.compatible, via.compatible)
        });
        if let Some((m, g, w)) = via.witness {
            // a witness must reproduce: rebuild the untwisted pair and
            // compare the untwisted traces at the witnessed entry
            let datum = build_descent(&x, m, g).unwrap();
            let check = |idx: usize| {
                let v = &s.objects[idx];
                let plus: Vec<_> =
                    v.plus.iter().map(|sh| untwist(&datum, sh).unwrap()).collect();
                let minus: Vec<_> =
                    v.minus.iter().map(|sh| untwist(&datum, sh).unwrap()).collect();
                let vv = VirtualClass::new(datum.target.clone(), v.conductor, plus, minus)
                    .unwrap();
                s.sigmas[idx]
                    .inverse()
                    .apply(&vv.trace(w.point, (w.k, w.j)).unwrap())
                    .unwrap()
            };
            let (lv, rv) = (check(w.lambda.0), check(w.lambda.1));
            out.case(lv == w.left && rv == w.right && lv != rv, || {
                format!("system {i}: witness does not reproduce")
            });
        }
    }
    assert!(engineered >= 20);
    out
}

/// Criterion: the truncated check agrees with the full check.
pub fn suite_truncation(seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("truncated criterion agreement");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases = system_bases();
    for i in 0..500 {
        let x = bases[i % bases.len()].clone();
        let conductor = [3u64, 4, 5][i % 3];
        let s = random_system(&mut rng, &x, conductor, i % 4 == 0);
        let full = check_compatibility(&s).unwrap().compatible;
        for n in [1i64, 2, 5] {
            let trunc = check_compatibility_truncated(&s, n).unwrap().compatible;
            out.case(full == trunc, || format!("system {i}: N={n} full={full} trunc={trunc}"));
        }
    }
    out
}

/// Criterion: every listed operation preserves compatibility.
pub fn suite_closure(seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("closure under operations");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c2pt = point_with_group(FiniteGroup::cyclic(2));
    let pt = single_point();
    let quot = quotient_to_point(&c2pt);
    let idp = Morphism::identity(&pt);
    let lx = local_point(3);
    for i in 0..100 {
        let conductor = [3u64, 4, 5][i % 3];
        // finite-point system: tensor, hom, dual, twist, pullback,
        // extend-by-zero, pushforward (along identity)
        let s_pt = random_system(&mut rng, &pt, conductor, false);
        for (tag, op) in [
            ("tensor", ClosureOp::Tensor),
            ("hom", ClosureOp::InternalHom),
            ("dual", ClosureOp::Dual),
            ("tate_twist", ClosureOp::TateTwist(1)),
            ("pullback", ClosureOp::Pullback(&quot)),
            ("extend_by_zero", ClosureOp::ExtendByZero(&idp)),
        ] {
            let v = crate::compat::closure_harness(&s_pt, &op).unwrap();
            out.case(v.compatible, || format!("system {i}: {tag}"));
        }
        // group-point system: pushforward along the quotient, untwisting
        let s_c2 = random_system(&mut rng, &c2pt, conductor, false);
        for (tag, op) in [
            ("pushforward", ClosureOp::Pushforward(&quot)),
            ("untwist", ClosureOp::Untwist { m: 1 + (i as i64 % 2), g: 1 }),
        ] {
            let v = crate::compat::closure_harness(&s_c2, &op).unwrap();
            out.case(v.compatible, || format!("system {i}: {tag}"));
        }
        // local system: inertia invariants and nearby cycles
        let s_loc = random_system(&mut rng, &lx, conductor, false);
        let v = crate::compat::closure_harness(&s_loc, &ClosureOp::InertiaInvariants).unwrap();
        out.case(v.compatible, || format!("system {i}: inertia_invariants"));
        let pd = points_of(&lx).remove(0);
        let incl = SplitHom::identity(&pd.group);
        let v = crate::compat::closure_harness(
            &s_loc,
            &ClosureOp::NearbyCycles { w1: &pd.group, incl: &incl },
        )
        .unwrap();
        out.case(v.compatible, || format!("system {i}: nearby_cycles"));
    }
    out
}

/// Criterion: the inertia-cohomology class equals an independent projector
/// computation with the twist applied as a scalar on the trace table.
pub fn suite_inertia_invariants(seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("inertia invariants formula");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..50 {
        let x = local_point(if i % 2 == 0 { 2 } else { 3 });
        let conductor = [3u64, 4, 6][i % 3];
        let v = random_class(&mut rng, &x, conductor, 2);
        let v = if i % 3 == 0 { v.sub(&random_class(&mut rng, &x, conductor, 1)).unwrap() } else { v };
        let got = inertia_invariants_class(&v).unwrap();
        let pd = points_of(&x).remove(0);
        let w = &pd.group;
        let n0 = w.frob_step;
        let q = Rat::new(BigInt::from(x.base.q()), BigInt::from(1));
        // independent computation: averaging projector over the marked
        // subgroup, twist as a scalar
        let projected_trace = |st: &WeilRep, k: usize, j: i64| -> CycloElem {
            if st.dim == 0 {
                return CycloElem::zero(conductor).unwrap();
            }
            let mut p = CycloMatrix::zero(conductor, st.dim, st.dim).unwrap();
            for &s in &st.group.inertia {
                p = p.add(st.rho(s)).unwrap();
            }
            let p = p.scale_rat(&Rat::new(
                BigInt::from(1),
                BigInt::from(st.group.inertia.len() as i64),
            ));
            p.mul(&st.value((k, j)).unwrap()).unwrap().trace().unwrap()
        };
        let mut ok = true;
        let window = 2 * (0..v.points().len()).map(|p| v.dim_at(p)).max().unwrap_or(1) as i64;
        for k in w.kernel.elements() {
            for j in -window..=window {
                let mut expect = CycloElem::zero(conductor).unwrap();
                for sh in &v.plus {
                    expect = expect.checked_add(&projected_trace(sh.stalk(0), k, j)).unwrap();
                }
                for sh in &v.minus {
                    expect = expect.checked_sub(&projected_trace(sh.stalk(0), k, j)).unwrap();
                }
                // multiply by (1 − q^{j·n₀}) for the twist subtraction
                let mut qpow = Rat::new(BigInt::from(1), BigInt::from(1));
                let e = j * n0;
                for _ in 0..e.unsigned_abs() {
                    if e >= 0 {
                        qpow *= q.clone();
                    } else {
                        qpow /= q.clone();
                    }
                }
                let expect = expect.checked_sub(&expect.scale(&qpow)).unwrap();
                if got.trace(0, (k, j)).unwrap() != expect {
                    ok = false;
                }
            }
        }
        out.case(ok, || format!("system {i}"));
    }
    out
}

/// Criterion: duality is an exact involution and exchanges with
/// pushforward on classes.
pub fn suite_duality() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("duality involution and exchange");
    for (name, l) in sheaf_catalog(4) {
        let dd = dual(&dual(&l).unwrap()).unwrap();
        out.case(dd.stalks() == l.stalks(), || format!("{name}: biduality"));
        // duality exchanges the two pushforwards; at dimension zero they
        // coincide, so it must commute with the one pushforward on classes
        let f = quotient_to_point(l.base());
        let a = VirtualClass::from_sheaf(dual(&pushforward(&f, &l).unwrap()).unwrap());
        let b = VirtualClass::from_sheaf(pushforward(&f, &dual(&l).unwrap()).unwrap());
        out.case(classes_equal(&a, &b).unwrap().is_none(), || {
            format!("{name}: pushforward exchange")
        });
        // dual of a twist is the opposite twist of the dual
        let c = VirtualClass::from_sheaf(dual(&tate_twist(&l, 1).unwrap()).unwrap());
        let d = VirtualClass::from_sheaf(tate_twist(&dual(&l).unwrap(), -1).unwrap());
        out.case(classes_equal(&c, &d).unwrap().is_none(), || {
            format!("{name}: twist exchange")
        });
    }
    out
}

/// Criterion: point homomorphisms of quotient morphisms are surjective,
/// bijective exactly for free actions, and base change lands on the
/// predicted subgroup.
pub fn suite_point_homs() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("point homomorphism images");
    for case in quotient_cases() {
        let f = &case.f;
        for pd in points_of(&f.source) {
            let ybar = f.apply(pd.basepoint);
            let (wy, ey) = weil_group_at(&f.target, ybar).unwrap();
            let phi =
                crate::arith::point_hom(f, pd.basepoint, &pd.group, &pd.embedding, &wy, &ey)
                    .unwrap();
            out.case(phi.is_surjective(&wy), || format!("{}: surjectivity", case.name));
            out.case(phi.is_bijective(&wy) == case.free, || {
                format!("{}: bijectivity vs freeness", case.name)
            });
        }
    }
    // base change morphisms: the image has the predicted index
    let bases: Vec<GaloisGSet> = vec![
        single_point(),
        swap_point(),
        point_with_group(FiniteGroup::cyclic(2)),
        free_gset(&FiniteGroup::cyclic(3)),
    ];
    for x in &bases {
        for m in 2..=4i64 {
            let base_m = BaseField::new(x.base.p, x.base.f * m as u32, x.base.kind).unwrap();
            let frob_m: Vec<usize> = (0..x.size()).map(|p| x.frob(p, m)).collect();
            let action: Vec<Vec<usize>> = (0..x.size())
                .map(|p| x.group.elements().map(|g| x.act(p, g)).collect())
                .collect();
            let xm = GaloisGSet::new(x.group.clone(), x.size(), action, frob_m, None, base_m)
                .unwrap();
            let f = Morphism::new(
                xm.clone(),
                x.clone(),
                GroupHom::identity(&x.group),
                (0..x.size()).collect(),
                m,
            )
            .unwrap();
            for pd in points_of(&xm) {
                let ybar = f.apply(pd.basepoint);
                let (wy, ey) = weil_group_at(&f.target, ybar).unwrap();
                let phi =
                    crate::arith::point_hom(&f, pd.basepoint, &pd.group, &pd.embedding, &wy, &ey);
                let phi = match phi {
                    Ok(p) => p,
                    Err(e) => {
                        out.case(false, || format!("base change m={m}: {e}"));
                        continue;
                    }
                };
                let (_, _, t) = crate::arith::base_change_image(&wy, m).unwrap();
                out.case(phi.w0_image.1 == t, || {
                    format!("base change m={m}: index {} ≠ {}", phi.w0_image.1, t)
                });
                out.case(phi.is_injective_on_kernel(), || {
                    format!("base change m={m}: kernel not injective")
                });
                out.case(
                    phi.is_surjective(&wy) == (t == 1),
                    || format!("base change m={m}: surjectivity vs index"),
                );
            }
        }
    }
    out
}

/// Run every suite with the given seed.
pub fn run_all_suites(seed: u64) -> Vec<SuiteOutcome> {
    vec![
        suite_coinduction_oracle(seed),
        suite_mackey(seed),
        suite_adjunction(),
        suite_scholie(),
        suite_descent_criterion(seed),
        suite_truncation(seed),
        suite_closure(seed),
        suite_inertia_invariants(seed),
        suite_duality(),
        suite_point_homs(),
    ]
}
