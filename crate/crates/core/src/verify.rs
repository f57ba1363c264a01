//! Verification suites: each structured algorithm run against an
//! independent brute-force computation over a fixed, seeded corpus.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bigraph::BipartiteIso;
use crate::finsemi::{self, rb_extension_automorphism, FiniteSemigroup, RectangularBand, Subband};
use crate::groups::{group_automorphisms, FiniteGroup};
use crate::orbits::{self, PermutationGroup, PsiFamily};
use crate::rees::{counterexample_family, ReesMatrixSemigroup, SandwichMatrix};
use crate::reesiso::{self, compose_iso, invert_iso, validate_iso, ReesIso, DEFAULT_CANDIDATE_LIMIT};
use crate::semilat::{self, Semilattice, StrongSemilattice};
use crate::tuples::bell;

pub const SUITES: &[&str] = &[
    "iso-theorem",
    "calculus",
    "idempotents",
    "orthodoxy",
    "normalization",
    "orbits",
    "sss-soundness",
    "purity",
    "psi-system",
    "rb-extension",
    "counterexample",
];

const SEED: u64 = 0x5e31_ca75;
const BRUTE_LIMIT: usize = 65;
const MAX_RECORDED: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown suite `{0}`; expected one of {list} or `all`", list = SUITES.join(", "))]
    UnknownSuite(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub passed: bool,
    pub instances: usize,
    pub checks: u64,
    pub failed: u64,
    /// The first few failures, with witnesses.
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    fn new(suite: &str) -> Self {
        Self { suite: suite.to_string(), passed: true, instances: 0, checks: 0, failed: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(witness());
        }
    }

    fn fail(&mut self, witness: String) {
        self.passed = false;
        self.failed += 1;
        if self.failures.len() < MAX_RECORDED {
            self.failures.push(witness);
        }
    }
}

/// Runs one suite by name, or every suite for `all`.
pub fn run(name: &str) -> Result<Vec<SuiteOutcome>, VerifyError> {
    if name == "all" {
        return Ok(SUITES.iter().map(|s| run_one(s).expect("listed suite")).collect());
    }
    run_one(name).map(|o| vec![o])
}

pub fn run_one(name: &str) -> Result<SuiteOutcome, VerifyError> {
    Ok(match name {
        "iso-theorem" => iso_theorem(),
        "calculus" => calculus(),
        "idempotents" => idempotents(),
        "orthodoxy" => orthodoxy(),
        "normalization" => normalization(),
        "orbits" => orbit_counting(),
        "sss-soundness" => sss_soundness(),
        "purity" => purity(),
        "psi-system" => psi_system(),
        "rb-extension" => rb_extension(),
        "counterexample" => counterexample(),
        other => return Err(VerifyError::UnknownSuite(other.to_string())),
    })
}

fn corpus_groups() -> Vec<FiniteGroup> {
    vec![FiniteGroup::trivial(), FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::cyclic(4), FiniteGroup::klein()]
}

/// A regular matrix with each entry zero with probability `zero_rate`.
pub fn random_regular_matrix(group: &FiniteGroup, rows: usize, cols: usize, zero_rate: f64, rng: &mut impl Rng) -> SandwichMatrix {
    loop {
        let entries: Vec<Vec<Option<usize>>> = (0..rows)
            .map(|_| (0..cols).map(|_| (!rng.gen_bool(zero_rate)).then(|| rng.gen_range(0..group.order()))).collect())
            .collect();
        if let Ok(m) = SandwichMatrix::new(entries) {
            if ReesMatrixSemigroup::new(group.clone(), m.clone()).is_ok() {
                return m;
            }
        }
    }
}

/// Every regular `rows x cols` matrix over a group of order `g`.
pub fn all_regular_matrices(g: usize, rows: usize, cols: usize) -> Vec<SandwichMatrix> {
    let cell: Vec<Option<usize>> = std::iter::once(None).chain((0..g).map(Some)).collect();
    (0..rows * cols)
        .map(|_| cell.iter().copied())
        .multi_cartesian_product()
        .filter_map(|flat| {
            let rows_vec: Vec<Vec<Option<usize>>> = flat.chunks(cols).map(<[_]>::to_vec).collect();
            let regular = rows_vec.iter().all(|r| r.iter().any(Option::is_some))
                && (0..cols).all(|i| rows_vec.iter().any(|r| r[i].is_some()));
            regular.then(|| SandwichMatrix::new(rows_vec).expect("rectangular"))
        })
        .collect()
}

/// Rees matrix semigroups over groups of order at most 4 with `|I|, |Lambda| <= 3`:
/// for each group and shape, the all-identity matrix, the identity matrix
/// when square, a diagonal of distinct-as-possible elements, and four random
/// regular matrices.
pub fn rees_corpus() -> Vec<ReesMatrixSemigroup> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();
    for group in corpus_groups() {
        for (rows, cols) in itertools::iproduct!(1..=3, 1..=3) {
            let mut push = |m: SandwichMatrix| out.push(ReesMatrixSemigroup::new(group.clone(), m).expect("regular"));
            let n = group.order();
            push(SandwichMatrix::from_fn(rows, cols, |_, _| Some(0)));
            if rows == cols {
                push(SandwichMatrix::identity(rows));
            }
            push(SandwichMatrix::from_fn(rows, cols, |l, i| Some(if l == i { (l + 1) % n } else { 0 })));
            for zero_rate in [0.0, 0.3, 0.3, 0.5] {
                push(random_regular_matrix(&group, rows, cols, zero_rate, &mut rng));
            }
        }
    }
    out
}

/// A random isomorphic copy of `s` and the quadruple carrying `s` onto it:
/// `q_{lambda psi, i psi} = v_lambda^-1 (p theta) u_i^-1`.
pub fn scramble(s: &ReesMatrixSemigroup, rng: &mut impl Rng) -> (ReesMatrixSemigroup, ReesIso) {
    let g = s.group();
    let theta = group_automorphisms(g).choose(rng).expect("identity").clone();
    let mut left = (0..s.index_size()).collect_vec();
    let mut right = (0..s.lambda_size()).collect_vec();
    left.shuffle(rng);
    right.shuffle(rng);
    let u = (0..s.index_size()).map(|_| rng.gen_range(0..g.order())).collect_vec();
    let v = (0..s.lambda_size()).map(|_| rng.gen_range(0..g.order())).collect_vec();
    let mut q = vec![vec![None; s.index_size()]; s.lambda_size()];
    for (l, i, p) in s.matrix().nonzero() {
        q[right[l]][left[i]] = Some(g.mul(g.mul(g.inv(v[l]), theta.apply(p)), g.inv(u[i])));
    }
    let t = ReesMatrixSemigroup::new(g.clone(), SandwichMatrix::new(q).expect("rectangular")).expect("regular");
    (t, ReesIso { theta, psi: BipartiteIso { left, right }, u, v })
}

fn structured_maps(s: &ReesMatrixSemigroup, t: &ReesMatrixSemigroup) -> Result<Vec<Vec<usize>>, String> {
    let isos = reesiso::enumerate_isos(s, t, DEFAULT_CANDIDATE_LIMIT).map_err(|e| e.to_string())?;
    Ok(isos.iter().map(|phi| phi.to_map(s, t)).sorted().dedup().collect())
}

fn describe(s: &ReesMatrixSemigroup) -> String {
    format!("|G|={} P={:?}", s.group().order(), s.matrix().to_rows())
}

fn iso_theorem() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("iso-theorem");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let corpus = rees_corpus();
    let mut by_shape: BTreeMap<(usize, usize, usize), Vec<usize>> = BTreeMap::new();
    for (k, s) in corpus.iter().enumerate() {
        by_shape.entry((s.group().order(), s.index_size(), s.lambda_size())).or_default().push(k);
    }
    let mut isomorphic_pairs = 0;
    for (k, s) in corpus.iter().enumerate() {
        out.instances += 1;
        let (copy, _) = scramble(s, &mut rng);
        let peers = &by_shape[&(s.group().order(), s.index_size(), s.lambda_size())];
        let other = &corpus[peers[rng.gen_range(0..peers.len())]];
        for t in [s, &copy, other] {
            let structured = structured_maps(s, t);
            let brute = finsemi::brute_force_isomorphisms(&s.to_semigroup(), &t.to_semigroup(), BRUTE_LIMIT).map_err(|e| e.to_string());
            match (structured, brute) {
                (Ok(a), Ok(b)) => {
                    isomorphic_pairs += usize::from(!b.is_empty());
                    out.check(a == b, || format!("instance {k}: {} vs {}: structured {} maps, brute force {}", describe(s), describe(t), a.len(), b.len()));
                }
                (a, b) => out.fail(format!("instance {k}: {:?} / {:?}", a.err(), b.err())),
            }
        }
    }
    out.notes.push(format!("{} pairs compared, {isomorphic_pairs} of them isomorphic", out.checks));
    out
}

fn calculus() -> SuiteOutcome {
    const TRIPLE_BUDGET: usize = 1_000_000;
    const TRIPLE_SAMPLE: usize = 12;
    let mut out = SuiteOutcome::new("calculus");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut sampled = 0;
    for s in rees_corpus().into_iter().filter(|s| s.order() <= 27) {
        out.instances += 1;
        let (t, _) = scramble(&s, &mut rng);
        let (isos, auts) = match (reesiso::enumerate_isos(&s, &t, DEFAULT_CANDIDATE_LIMIT), reesiso::enumerate_automorphisms(&t, DEFAULT_CANDIDATE_LIMIT)) {
            (Ok(a), Ok(b)) => (a, b),
            (a, b) => {
                out.fail(format!("{}: {:?} / {:?}", describe(&s), a.err(), b.err()));
                continue;
            }
        };
        let iso_maps = isos.iter().map(|p| p.to_map(&s, &t)).collect_vec();
        let aut_maps = auts.iter().map(|a| a.to_map(&t, &t)).collect_vec();
        let then = |f: &[usize], g: &[usize]| f.iter().map(|&x| g[x]).collect_vec();
        for (phi, phi_map) in isos.iter().zip(&iso_maps) {
            let inv = invert_iso(phi, t.group()).to_map(&t, &s);
            out.check(then(phi_map, &inv) == (0..s.order()).collect_vec(), || format!("{}: inverse of {phi:?}", describe(&s)));
            for (alpha, alpha_map) in auts.iter().zip(&aut_maps) {
                let composite = compose_iso(phi, alpha, t.group()).map(|c| c.to_map(&s, &t));
                out.check(composite.as_ref() == Ok(&then(phi_map, alpha_map)), || format!("{}: {phi:?} then {alpha:?}", describe(&s)));
            }
        }
        // chains S -> T -> T -> T, all of them when affordable
        let take = if isos.len() * auts.len() * auts.len() <= TRIPLE_BUDGET { usize::MAX } else { TRIPLE_SAMPLE };
        sampled += usize::from(take == TRIPLE_SAMPLE);
        let sample = auts.iter().zip(&aut_maps).take(take).collect_vec();
        for ((phi, phi_map), (a, a_map), (b, b_map)) in itertools::iproduct!(isos.iter().zip(&iso_maps).take(take), &sample, &sample) {
            let chained = compose_iso(phi, a, t.group()).and_then(|c| compose_iso(&c, b, t.group())).map(|c| c.to_map(&s, &t));
            out.check(chained.as_ref() == Ok(&then(&then(phi_map, a_map), b_map)), || format!("{}: triple composite", describe(&s)));
        }
    }
    out.notes.push(format!(
        "pairs: every isomorphism with every automorphism of the codomain; triples: all, except the first {TRIPLE_SAMPLE} of each on {sampled} instances with more than {TRIPLE_BUDGET}"
    ));
    out
}

fn idempotents() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("idempotents");
    for s in rees_corpus() {
        out.instances += 1;
        let brute = (0..s.order()).filter(|&x| s.mul(x, x) == x).collect_vec();
        let formula = s.idempotents();
        out.check(formula == brute, || format!("{}: formula {formula:?}, scan {brute:?}", describe(&s)));
    }
    out
}

fn orthodoxy() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("orthodoxy");
    let mut orthodox = 0;
    for group in [FiniteGroup::trivial(), FiniteGroup::cyclic(2)] {
        for (rows, cols) in itertools::iproduct!(1..=3, 1..=3) {
            for m in all_regular_matrices(group.order(), rows, cols) {
                let s = ReesMatrixSemigroup::new(group.clone(), m).expect("regular");
                out.instances += 1;
                let predicted = s.structural_predicates().is_orthodox;
                let normal = s.graham_normalize().semigroup;
                let pure = normal.matrix().nonzero().all(|(_, _, p)| p == group.identity());
                let complete = s.induced_graph().components().iter().all(|c| c.graph.edge_count() == c.left.len() * c.right.len());
                let flat = s.to_semigroup();
                out.check(predicted == flat.idempotents_closed(), || format!("{}: predicate disagrees with the idempotent closure scan", describe(&s)));
                out.check(predicted == (pure && complete), || format!("{}: orthodox {predicted}, pure {pure}, complete components {complete}", describe(&s)));
                orthodox += usize::from(predicted);
            }
        }
    }
    out.notes.push(format!("{orthodox} of {} matrices orthodox", out.instances));
    out
}

fn normalization() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("normalization");
    for s in rees_corpus() {
        out.instances += 1;
        let n = s.graham_normalize();
        let verdict = validate_iso(&s, &n.semigroup, &n.iso);
        out.check(verdict.as_ref().is_ok_and(|v| v.is_valid()), || format!("{}: {verdict:?}", describe(&s)));
        let identity = s.group().identity();
        let forest_size = s.index_size() + s.lambda_size() - s.induced_graph().components().len();
        out.check(n.tree_edges.len() == forest_size, || format!("{}: forest has {} edges", describe(&s), n.tree_edges.len()));
        for &(i, l) in &n.tree_edges {
            out.check(n.semigroup.matrix().get(l, i) == Some(identity), || format!("{}: tree edge ({i}, {l}) not the identity", describe(&s)));
        }
    }
    out
}

fn orbit_counting() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("orbits");
    let compare = |out: &mut SuiteOutcome, label: String, g: &PermutationGroup| {
        let burnside = orbits::oligomorphy_profile(g, 3);
        match orbits::union_find_profile(g, 3, orbits::DEFAULT_TUPLE_LIMIT) {
            Ok(uf) => out.check(uf == burnside, || format!("{label}: Burnside {:?}, union-find {:?}", burnside.counts, uf.counts)),
            Err(e) => out.fail(format!("{label}: {e}")),
        }
        burnside
    };
    for s in rees_corpus().into_iter().filter(|s| s.order() <= 15) {
        out.instances += 1;
        let maps = match reesiso::enumerate_automorphisms(&s, DEFAULT_CANDIDATE_LIMIT) {
            Ok(a) => a.iter().map(|a| a.to_map(&s, &s)).collect_vec(),
            Err(e) => {
                out.fail(format!("{}: {e}", describe(&s)));
                continue;
            }
        };
        match PermutationGroup::from_elements(s.order(), &maps) {
            Ok(g) => {
                out.check(g.order() == maps.len(), || format!("{}: automorphisms do not form a group", describe(&s)));
                compare(&mut out, describe(&s), &g);
            }
            Err(e) => out.fail(format!("{}: {e}", describe(&s))),
        }
    }
    for m in 1..=15usize {
        out.instances += 1;
        let p = compare(&mut out, format!("trivial group on {m} points"), &PermutationGroup::trivial(m));
        for n in 1..=3u32 {
            out.check(p.counts[n as usize - 1] == m.pow(n).into(), || format!("trivial group on {m} points, n = {n}"));
        }
    }
    for m in 1..=6usize {
        out.instances += 1;
        let p = compare(&mut out, format!("Sym({m})"), &PermutationGroup::symmetric(m));
        for n in (1..=3usize).filter(|&n| n <= m) {
            out.check(p.counts[n - 1] == bell(n).into(), || format!("Sym({m}), n = {n}: {} orbits", p.counts[n - 1]));
        }
    }
    out
}

/// Homomorphisms `s -> t` by scanning every map.
fn homomorphisms(s: &FiniteSemigroup, t: &FiniteSemigroup) -> Vec<Vec<usize>> {
    (0..s.order())
        .map(|_| 0..t.order())
        .multi_cartesian_product()
        .filter(|m| itertools::iproduct!(s.elements(), s.elements()).all(|(a, b)| m[s.mul(a, b)] == t.mul(m[a], m[b])))
        .collect()
}

fn component_pool() -> Vec<(&'static str, FiniteSemigroup, bool)> {
    let group = |g: FiniteGroup| FiniteSemigroup::from_group(&g);
    let band = |l, r| RectangularBand::new(l, r).expect("nonempty").to_semigroup();
    vec![
        ("Z1", group(FiniteGroup::trivial()), true),
        ("Z2", group(FiniteGroup::cyclic(2)), true),
        ("Z3", group(FiniteGroup::cyclic(3)), true),
        ("RB(1,2)", band(1, 2), false),
        ("RB(2,1)", band(2, 1), false),
        ("RB(2,2)", band(2, 2), false),
    ]
}

fn corpus_lattices() -> Vec<(&'static str, Semilattice)> {
    let v = Semilattice::from_table(&[vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 2]]).expect("semilattice");
    let diamond = Semilattice::from_table(&[vec![0, 0, 0, 0], vec![0, 1, 0, 1], vec![0, 0, 2, 2], vec![0, 1, 2, 3]]).expect("semilattice");
    vec![("1", Semilattice::chain(1)), ("2-chain", Semilattice::chain(2)), ("3-chain", Semilattice::chain(3)), ("V", v), ("diamond", diamond)]
}

/// A labelled strong semilattice from the corpus, with its kind.
pub struct CorpusSss {
    pub label: String,
    pub sss: StrongSemilattice,
    pub clifford: bool,
    pub normal_band: bool,
}

/// Strong semilattices of groups and rectangular bands with at most 12
/// elements. Connectors are chosen on covering pairs and composed along
/// paths; at most `per_shape` consistent choices are kept per assignment.
pub fn sss_corpus(per_shape: usize) -> Vec<CorpusSss> {
    let pool = component_pool();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut out = Vec::new();
    for (lname, y) in corpus_lattices() {
        let n = y.order();
        let covers = itertools::iproduct!(0..n, 0..n)
            .filter(|&(a, b)| a != b && y.geq(a, b) && !(0..n).any(|c| c != a && c != b && y.geq(a, c) && y.geq(c, b)))
            .collect_vec();
        for assignment in (0..n).map(|_| 0..pool.len()).multi_cartesian_product() {
            if assignment.iter().map(|&k| pool[k].1.order()).sum::<usize>() > 12 {
                continue;
            }
            let comps = assignment.iter().map(|&k| pool[k].1.clone()).collect_vec();
            let options = covers.iter().map(|&(a, b)| homomorphisms(&comps[a], &comps[b])).collect_vec();
            let mut choices = options.iter().map(|o| 0..o.len()).multi_cartesian_product().collect_vec();
            choices.shuffle(&mut rng);
            let mut kept = 0;
            for choice in choices {
                if kept == per_shape {
                    break;
                }
                let cover_maps: BTreeMap<(usize, usize), &Vec<usize>> =
                    covers.iter().zip(&choice).map(|(&k, &c)| (k, &options[covers.iter().position(|x| *x == k).expect("cover")][c])).collect();
                let Some(connectors) = compose_covers(&y, &comps, &cover_maps) else { continue };
                if let Ok(sss) = StrongSemilattice::new(y.clone(), comps.clone(), connectors) {
                    kept += 1;
                    let names = assignment.iter().map(|&k| pool[k].0).join(",");
                    out.push(CorpusSss {
                        label: format!("Y={lname} [{names}] connectors {choice:?}"),
                        clifford: assignment.iter().all(|&k| pool[k].2),
                        normal_band: assignment.iter().all(|&k| !pool[k].2),
                        sss,
                    });
                }
            }
        }
    }
    out
}

/// Connectors for every `alpha > beta` composed along covering chains, or
/// `None` if two chains disagree.
fn compose_covers(y: &Semilattice, comps: &[FiniteSemigroup], covers: &BTreeMap<(usize, usize), &Vec<usize>>) -> Option<Vec<((usize, usize), Vec<usize>)>> {
    let n = y.order();
    let mut all: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for a in 0..n {
        all.insert((a, a), comps[a].elements().collect());
    }
    // process pairs by increasing height difference so shorter paths are ready
    let height = |a: usize| (0..n).filter(|&b| y.geq(a, b)).count();
    let pairs = itertools::iproduct!(0..n, 0..n).filter(|&(a, b)| a != b && y.geq(a, b)).sorted_by_key(|&(a, b)| height(a) - height(b)).collect_vec();
    for (a, b) in pairs {
        let mut candidate: Option<Vec<usize>> = None;
        for (&(c, d), map) in covers.iter().filter(|((c, _), _)| *c == a) {
            if !y.geq(d, b) {
                continue;
            }
            let rest = all.get(&(d, b))?;
            let composite = map.iter().map(|&x| rest[x]).collect_vec();
            debug_assert_eq!(c, a);
            match &candidate {
                Some(existing) if *existing != composite => return None,
                _ => candidate = Some(composite),
            }
        }
        all.insert((a, b), candidate?);
    }
    Some(all.into_iter().filter(|((a, b), _)| a != b).collect())
}

fn sss_soundness() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("sss-soundness");
    let mut accepted_total = 0u64;
    for c in sss_corpus(usize::MAX) {
        out.instances += 1;
        let s = &c.sss;
        let y = s.lattice();
        let n = y.order();
        let flat = s.flatten();
        let pis = match y.automorphisms() {
            Ok(p) => p,
            Err(e) => {
                out.fail(format!("{}: {e}", c.label));
                continue;
            }
        };
        for pi in pis {
            let options: Result<Vec<Vec<Vec<usize>>>, _> =
                (0..n).map(|a| finsemi::brute_force_isomorphisms(s.component(a), s.component(pi[a]), BRUTE_LIMIT)).collect();
            let Ok(options) = options else {
                out.fail(format!("{}: component isomorphism search failed", c.label));
                continue;
            };
            for choice in options.iter().map(|o| o.iter()).multi_cartesian_product() {
                let maps = choice.into_iter().cloned().collect_vec();
                let commutes = itertools::iproduct!(0..n, 0..n).filter(|&(a, b)| y.geq(a, b)).all(|(a, b)| {
                    let down = s.connector(a, b).expect("a >= b");
                    let across = s.connector(pi[a], pi[b]).expect("automorphism");
                    s.component(a).elements().all(|x| maps[b][down[x]] == across[maps[a][x]])
                });
                let flat_map = (0..s.order())
                    .map(|x| {
                        let (a, local) = s.locate(x);
                        s.global(pi[a], maps[a][local])
                    })
                    .collect_vec();
                let multiplicative = flat.is_isomorphism(&flat, &flat_map);
                let accepted = semilat::sss_build_automorphism(s, &pi, &maps).is_ok();
                accepted_total += u64::from(accepted);
                out.check(accepted == commutes, || format!("{}: pi {pi:?} maps {maps:?}: accepted {accepted}, diagrams commute {commutes}", c.label));
                out.check(accepted == multiplicative, || format!("{}: pi {pi:?} maps {maps:?}: accepted {accepted}, multiplicative {multiplicative}", c.label));
            }
        }
    }
    out.notes.push(format!("{accepted_total} accepted candidates; components are groups and rectangular bands"));
    out
}

fn purity() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("purity");
    let (mut clifford, mut normal) = (0, 0);
    for c in sss_corpus(24).into_iter().filter(|c| c.clifford || c.normal_band) {
        out.instances += 1;
        clifford += usize::from(c.clifford);
        normal += usize::from(c.normal_band);
        match semilat::is_automorphism_pure(&c.sss, BRUTE_LIMIT) {
            Ok(r) => out.check(r.pure && r.witnesses.is_empty(), || format!("{}: witnesses {:?}", c.label, r.witnesses)),
            Err(e) => out.fail(format!("{}: {e}", c.label)),
        }
    }
    out.notes.push(format!("{clifford} Clifford semigroups, {normal} normal bands"));
    out
}

fn psi_system() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("psi-system");
    let mut instances = Vec::new();
    for group in [FiniteGroup::trivial(), FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)] {
        for (rows, cols) in itertools::iproduct!(1..=3usize, 1..=3usize).filter(|(r, c)| 1 + r * c * group.order() <= 12) {
            for m in all_regular_matrices(group.order(), rows, cols) {
                instances.push(ReesMatrixSemigroup::new(group.clone(), m).expect("regular"));
            }
        }
    }
    for s in &instances {
        out.instances += 1;
        match rees_component_system(s) {
            Ok(family) => match orbits::psi_system_check(&s.to_semigroup(), &family, BRUTE_LIMIT, orbits::DEFAULT_CHOICE_LIMIT) {
                Ok(r) => out.check(r.passed, || format!("{}: {r:?}", describe(s))),
                Err(e) => out.fail(format!("{}: {e}", describe(s))),
            },
            Err(e) => out.fail(format!("{}: {e}", describe(s))),
        }
        let flat = s.to_semigroup();
        let classes = flat.green_h();
        let h = flat.h_class_of();
        let pairs = flat.idempotents().into_iter().map(|e| (classes[h[e]].clone(), vec![e])).collect_vec();
        match orbits::pivoted_prc_check(&flat, &pairs, BRUTE_LIMIT) {
            Ok(r) => out.check(r.holds, || format!("{}: H-class system fails: {:?}", describe(s), r.witness)),
            Err(e) => out.fail(format!("{}: {e}", describe(s))),
        }
    }
    let mut pivoted = 0;
    for c in sss_corpus(2) {
        if !matches!(semilat::is_automorphism_pure(&c.sss, BRUTE_LIMIT), Ok(r) if r.pure) {
            continue;
        }
        pivoted += 1;
        let s = &c.sss;
        let pairs = (0..s.lattice().order()).map(|a| (s.component_elements(a).collect_vec(), vec![s.global(a, 0)])).collect_vec();
        match orbits::pivoted_prc_check(&s.flatten(), &pairs, BRUTE_LIMIT) {
            Ok(r) => out.check(r.holds, || format!("{}: component system fails: {:?}", c.label, r.witness)),
            Err(e) => out.fail(format!("{}: {e}", c.label)),
        }
    }
    out.notes.push(format!(
        "{} Rees matrix semigroups of order at most 12 (component systems and H-class systems); {pivoted} automorphism-pure strong semilattices (component systems)",
        instances.len()
    ));
    out
}

/// Connected Rees components with `Psi_{i,j}` the isomorphisms whose group
/// part is the identity, blocks the classes of "some such isomorphism exists".
pub fn rees_component_system(s: &ReesMatrixSemigroup) -> Result<PsiFamily, reesiso::ReesIsoError> {
    let d = s.decompose_components();
    let parts = d.components.iter().map(|c| c.semigroup(s.group())).collect_vec();
    let members = d.components.iter().map(|c| c.elements_in(s)).collect_vec();
    let mut psi = std::collections::HashMap::new();
    for (i, j) in itertools::iproduct!(0..parts.len(), 0..parts.len()) {
        let maps = reesiso::enumerate_trivial_isos(&parts[i], &parts[j], DEFAULT_CANDIDATE_LIMIT)?
            .iter()
            .map(|phi| phi.to_map(&parts[i], &parts[j]).into_iter().map(|x| members[j][x]).collect_vec())
            .collect_vec();
        psi.insert((i, j), maps);
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..parts.len() {
        match blocks.iter_mut().find(|b| !psi[&(b[0], i)].is_empty()) {
            Some(b) => b.push(i),
            None => blocks.push(vec![i]),
        }
    }
    Ok(PsiFamily { members, blocks, psi })
}

/// Membership of each point in each side set.
fn fingerprints(size: usize, sides: &[&Vec<usize>]) -> Vec<Vec<bool>> {
    (0..size).map(|x| sides.iter().map(|s| s.contains(&x)).collect()).collect()
}

fn shuffle_within_classes(fp: &[Vec<bool>], rng: &mut impl Rng) -> Vec<usize> {
    let mut map = (0..fp.len()).collect_vec();
    for class in (0..fp.len()).into_group_map_by(|&x| fp[x].clone()).into_values() {
        let mut shuffled = class.clone();
        shuffled.shuffle(rng);
        for (a, b) in class.into_iter().zip(shuffled) {
            map[a] = b;
        }
    }
    map
}

fn rb_extension() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("rb-extension");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut accepted_random = 0u64;
    for (l, r) in itertools::iproduct!(1..=4usize, 1..=4usize) {
        let band = RectangularBand::new(l, r).expect("nonempty");
        let sides = |n: usize| (1..1usize << n).map(move |mask| (0..n).filter(|b| mask >> b & 1 == 1).collect_vec()).collect_vec();
        let subbands = itertools::iproduct!(sides(l), sides(r)).map(|(a, b)| Subband::new(&band, a, b).expect("valid")).collect_vec();
        let families = (0..=3).flat_map(|k| subbands.iter().cloned().combinations(k));
        let semigroup = band.to_semigroup();
        for subs in families {
            out.instances += 1;
            let lefts = subs.iter().map(|b| &b.left).collect_vec();
            let rights = subs.iter().map(|b| &b.right).collect_vec();
            let hidden_l = shuffle_within_classes(&fingerprints(l, &lefts), &mut rng);
            let hidden_r = shuffle_within_classes(&fingerprints(r, &rights), &mut rng);
            let len = rng.gen_range(0..=3);
            let points = (0..len).map(|_| (rng.gen_range(0..l), rng.gen_range(0..r))).collect_vec();
            let positive = points.iter().map(|&(a, b)| ((a, b), (hidden_l[a], hidden_r[b]))).collect_vec();
            let random = points.iter().map(|&p| (p, (rng.gen_range(0..l), rng.gen_range(0..r)))).collect_vec();
            for (partial, must_succeed) in [(positive, true), (random, false)] {
                match rb_extension_automorphism(&band, &subs, &partial) {
                    Ok(phi) => {
                        accepted_random += u64::from(!must_succeed);
                        let map = phi.element_map();
                        out.check(semigroup.is_isomorphism(&semigroup, &map), || format!("{l}x{r} {subs:?} {partial:?}: not an automorphism"));
                        for sub in &subs {
                            let image: BTreeSet<usize> = sub.elements(&band).iter().map(|&x| map[x]).collect();
                            let own: BTreeSet<usize> = sub.elements(&band).into_iter().collect();
                            out.check(image == own, || format!("{l}x{r} {subs:?} {partial:?}: moves {sub:?}"));
                        }
                        for &((a, b), (c, d)) in &partial {
                            out.check(map[band.element(a, b)] == band.element(c, d), || format!("{l}x{r} {subs:?} {partial:?}: does not extend ({a},{b}) -> ({c},{d})"));
                        }
                    }
                    Err(e) => out.check(!must_succeed, || format!("{l}x{r} {subs:?} {partial:?}: rejected a restriction of a class-preserving automorphism: {e}")),
                }
            }
        }
    }
    out.notes.push(format!(
        "every family of at most 3 subbands of every band up to 4x4; {accepted_random} random partial maps accepted"
    ));
    out
}

fn counterexample() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("counterexample");
    let klein = FiniteGroup::klein();
    let family = (0..=3).map(|k| counterexample_family(&klein, k, 4).expect("k <= 3 <= n")).collect_vec();
    let mut pattern = Vec::new();
    for (a, b) in itertools::iproduct!(0..family.len(), 0..family.len()) {
        out.instances += 1;
        let structured = reesiso::first_iso(&family[a], &family[b], DEFAULT_CANDIDATE_LIMIT).map(|o| o.is_some());
        let brute = finsemi::first_isomorphism(&family[a].to_semigroup(), &family[b].to_semigroup(), BRUTE_LIMIT).map(|o| o.is_some());
        match (structured, brute) {
            (Ok(x), Ok(y)) => {
                out.check(x == y, || format!("k = {a} vs k = {b}: structured {x}, brute force {y}"));
                if x {
                    pattern.push((a, b));
                }
            }
            (x, y) => out.fail(format!("k = {a} vs k = {b}: {:?} / {:?}", x.err(), y.err())),
        }
    }
    let classes: Vec<Vec<usize>> = (0..family.len()).fold(Vec::new(), |mut acc: Vec<Vec<usize>>, k| {
        match acc.iter_mut().find(|c| pattern.contains(&(c[0], k))) {
            Some(c) => c.push(k),
            None => acc.push(vec![k]),
        }
        acc
    });
    out.notes.push(format!("order {} each; isomorphism classes of k = 0..=3: {classes:?}", family[0].order()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_sizes() {
        assert!(rees_corpus().len() >= 200);
        assert_eq!(all_regular_matrices(1, 2, 2).len(), 7);
        assert_eq!(all_regular_matrices(2, 1, 1).len(), 2);
    }

    #[test]
    fn scramble_produces_valid_isomorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in rees_corpus().iter().step_by(7) {
            let (t, phi) = scramble(s, &mut rng);
            assert_eq!(validate_iso(s, &t, &phi), Ok(reesiso::IsoCheck::Valid));
        }
    }

    #[test]
    fn sss_corpus_is_valid_and_small() {
        let corpus = sss_corpus(2);
        assert!(corpus.iter().all(|c| c.sss.order() <= 12));
        assert!(corpus.iter().any(|c| c.clifford) && corpus.iter().any(|c| c.normal_band));
        assert!(corpus.iter().any(|c| c.sss.lattice().order() == 4));
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(run("nope"), Err(VerifyError::UnknownSuite("nope".into())));
    }

    #[test]
    fn component_system_of_a_block_diagonal_matrix() {
        let m = SandwichMatrix::new(vec![vec![Some(0), None], vec![None, Some(0)]]).unwrap();
        let s = ReesMatrixSemigroup::new(FiniteGroup::cyclic(2), m).unwrap();
        let family = rees_component_system(&s).unwrap();
        assert_eq!(family.blocks, vec![vec![0, 1]]);
        let r = orbits::psi_system_check(&s.to_semigroup(), &family, 12, orbits::DEFAULT_CHOICE_LIMIT).unwrap();
        assert!(r.passed, "{r:?}");
    }
}
