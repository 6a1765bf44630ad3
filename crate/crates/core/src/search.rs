//! Exhaustive enumeration of elementary CAFs and of valid independent CAFs.
//!
//! Candidate tuples are built object by object. After each object the
//! per-profile set of categories already covered is kept as a bitmask; a
//! partial tuple is abandoned as soon as some profile can no longer reach
//! all `rho` categories with the objects that remain. For the last object
//! the surviving profiles pin down, per column, which outputs are allowed,
//! and the valid completions are exactly the product of those sets.
//!
//! Category-symmetry pruning restricts the first object's table to orbit
//! representatives under relabeling `t ↦ σ ∘ t ∘ σ⁻¹` and weights each subtree
//! by the orbit size. Relabeling maps tuples starting with `t` bijectively to
//! tuples starting with `σ·t` and preserves validity and every axiom counted
//! here, so the weighted totals equal the unpruned ones.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::axioms::{Axiom, ElementaryCaf, EssentialDictator, IndependentCaf};
use crate::error::{Error, Result};
use crate::model::{
    Budget, Category, CategoryPermutation, CategoryVector, Individual, Params, ProfileSpace,
};

/// Hard cap on the bytes held by the candidate table list.
const TABLE_MEMORY_LIMIT: u64 = 1 << 30;

/// Optional restriction on elementary tables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableConstraint {
    #[default]
    None,
    /// `alpha(p, ..., p) = p` for every category `p`.
    UnanimousOnConstants,
}

fn constant_codes(params: &Params) -> Vec<usize> {
    let (n, rho) = (params.n(), params.rho());
    // (p, ..., p) in base rho is p * (1 + rho + ... + rho^(n-1))
    let ones = (0..n).fold(0usize, |acc, _| acc * rho + 1);
    (0..rho).map(|p| p * ones).collect()
}

/// Number of elementary tables satisfying `constraint`.
pub fn count_elementary_cafs(params: &Params, constraint: TableConstraint) -> BigUint {
    let free = match constraint {
        TableConstraint::None => params.table_len(),
        TableConstraint::UnanimousOnConstants => params.table_len() - params.rho(),
    };
    BigUint::from(params.rho()).pow(free as u32)
}

/// Streams every elementary table (subject to `constraint`) in lexicographic
/// order of the table sequence.
pub fn enumerate_elementary_cafs(
    params: &Params,
    constraint: TableConstraint,
    budget: Budget,
) -> Result<ElementaryCafs> {
    budget.check(&count_elementary_cafs(params, constraint))?;
    let mut fixed = vec![None; params.table_len()];
    if constraint == TableConstraint::UnanimousOnConstants {
        for (p, code) in constant_codes(params).into_iter().enumerate() {
            fixed[code] = Some(p as u8);
        }
    }
    let current = fixed.iter().map(|f| f.unwrap_or(0)).collect();
    Ok(ElementaryCafs {
        params: *params,
        fixed,
        current: Some(current),
    })
}

/// Iterator returned by [`enumerate_elementary_cafs`].
#[derive(Clone, Debug)]
pub struct ElementaryCafs {
    params: Params,
    fixed: Vec<Option<u8>>,
    current: Option<Vec<u8>>,
}

impl ElementaryCafs {
    fn next_raw(&mut self) -> Option<Vec<u8>> {
        let rho = self.params.rho() as u8;
        let table = self.current.as_mut()?;
        let out = table.clone();
        let mut pos = table.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            if self.fixed[pos].is_some() {
                continue;
            }
            if table[pos] + 1 < rho {
                table[pos] += 1;
                break;
            }
            table[pos] = 0;
        }
        Some(out)
    }
}

impl Iterator for ElementaryCafs {
    type Item = ElementaryCaf;

    fn next(&mut self) -> Option<ElementaryCaf> {
        self.next_raw()
            .map(|raw| ElementaryCaf::from_raw(&self.params, &raw))
    }
}

/// What to enumerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub params: Params,
    /// Axioms an emitted CAF must satisfy on top of validity. Only validity,
    /// unanimity, citizen sovereignty and generalized unanimity are accepted.
    pub required: BTreeSet<Axiom>,
    pub constraint: TableConstraint,
    /// Maximum number of candidate-profile checks.
    pub budget: u64,
    pub prune_category_symmetry: bool,
    /// Worker threads; 0 means one per core.
    pub workers: usize,
}

impl SearchSpec {
    pub fn new(params: Params) -> Self {
        SearchSpec {
            params,
            required: BTreeSet::new(),
            constraint: TableConstraint::None,
            budget: Budget::default().0,
            prune_category_symmetry: false,
            workers: 0,
        }
    }

    pub fn require(mut self, axiom: Axiom) -> Self {
        self.required.insert(axiom);
        self
    }

    pub fn constraint(mut self, constraint: TableConstraint) -> Self {
        self.constraint = constraint;
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn prune(mut self, prune: bool) -> Self {
        self.prune_category_symmetry = prune;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::InvalidParams("budget must be positive".into()));
        }
        for axiom in &self.required {
            if !matches!(
                axiom,
                Axiom::Validity
                    | Axiom::Unanimity
                    | Axiom::CitizenSovereignty
                    | Axiom::GeneralizedUnanimity
            ) {
                return Err(Error::InvalidParams(format!(
                    "axiom {axiom} cannot be required in a search"
                )));
            }
        }
        Ok(())
    }
}

/// Raw candidate count before any validity filtering.
pub fn estimate_search_space(spec: &SearchSpec) -> BigUint {
    count_elementary_cafs(&spec.params, spec.constraint).pow(spec.params.m() as u32)
}

fn display<T: std::fmt::Display, S: Serializer>(
    value: &T,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

/// Per-axiom counts over all valid CAFs in the candidate space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomCounts {
    pub unanimity: u64,
    pub citizen_sovereignty: u64,
    pub generalized_unanimity: u64,
    pub essential_dictatorship: u64,
    pub dictatorship: u64,
}

impl AxiomCounts {
    fn add_scaled(&mut self, other: &AxiomCounts, k: u64) {
        self.unanimity += other.unanimity * k;
        self.citizen_sovereignty += other.citizen_sovereignty * k;
        self.generalized_unanimity += other.generalized_unanimity * k;
        self.essential_dictatorship += other.essential_dictatorship * k;
        self.dictatorship += other.dictatorship * k;
    }
}

/// One `(d, pi)` pair and whether the search emitted that essential dictatorship.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub individual: Individual,
    pub permutation: CategoryPermutation,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caf: Option<IndependentCaf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub params: Params,
    pub constraint: TableConstraint,
    pub required: Vec<Axiom>,
    pub pruned: bool,
    #[serde(serialize_with = "display")]
    pub candidates: BigUint,
    #[serde(serialize_with = "display")]
    pub work_estimate: BigUint,
    pub nodes_visited: u64,
    pub valid_count: u64,
    pub axiom_counts: AxiomCounts,
    pub emitted_count: u64,
    pub emitted_digest: String,
    pub census: Vec<CensusEntry>,
    pub elapsed_ms: u64,
}

/// Report plus the emitted CAFs in canonical order.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub report: SearchReport,
    pub cafs: Vec<IndependentCaf>,
}

#[derive(Default)]
struct Partial {
    nodes: u64,
    valid: u64,
    counts: AxiomCounts,
    emitted: Vec<Vec<Vec<u8>>>,
}

struct Engine<'a> {
    m: usize,
    n: usize,
    rho: usize,
    k: usize,
    full: u32,
    profiles: usize,
    cols: &'a [u32],
    tables: &'a [Vec<u8>],
    constants: Vec<usize>,
    /// `digits[code * n + i]` is individual `i`'s category in vector `code`.
    digits: Vec<u8>,
    constraint: TableConstraint,
    need_unanimity: bool,
    need_sovereignty: bool,
    need_gu: bool,
}

impl Engine<'_> {
    fn run_subtree(&self, first: usize) -> Partial {
        let mut out = Partial::default();
        let mut masks = vec![vec![0u32; self.profiles]; self.m];
        let t = &self.tables[first];
        let slack = (self.m - 1) as u32;
        for p in 0..self.profiles {
            let mask = 1u32 << t[self.cols[p * self.m] as usize];
            if mask.count_ones() + slack < self.rho as u32 {
                return out;
            }
            masks[0][p] = mask;
        }
        out.nodes += 1;
        let mut chosen = vec![first];
        let (first_masks, rest) = masks.split_first_mut().expect("m >= 2");
        self.descend(1, &mut chosen, first_masks, rest, &mut out);
        out
    }

    fn descend(
        &self,
        depth: usize,
        chosen: &mut Vec<usize>,
        prior: &[u32],
        rest: &mut [Vec<u32>],
        out: &mut Partial,
    ) {
        if depth == self.m - 1 {
            self.complete(chosen, prior, out);
            return;
        }
        let slack = (self.m - 1 - depth) as u32;
        let (current, tail) = rest.split_first_mut().expect("one mask row per object");
        'tables: for (ti, t) in self.tables.iter().enumerate() {
            for p in 0..self.profiles {
                let mask = prior[p] | 1u32 << t[self.cols[p * self.m + depth] as usize];
                if mask.count_ones() + slack < self.rho as u32 {
                    continue 'tables;
                }
                current[p] = mask;
            }
            out.nodes += 1;
            chosen.push(ti);
            self.descend(depth + 1, chosen, current, tail, out);
            chosen.pop();
        }
    }

    fn complete(&self, chosen: &[usize], prior: &[u32], out: &mut Partial) {
        out.nodes += 1;
        let last = self.m - 1;
        let mut allowed = vec![self.full; self.k];
        if self.constraint == TableConstraint::UnanimousOnConstants {
            for (p, &code) in self.constants.iter().enumerate() {
                allowed[code] &= 1 << p;
            }
        }
        for p in 0..self.profiles {
            let need = self.full & !prior[p];
            match need.count_ones() {
                0 => {}
                1 => allowed[self.cols[p * self.m + last] as usize] &= need,
                _ => return,
            }
        }
        if allowed.contains(&0) {
            return;
        }
        let choices: Vec<Vec<u8>> = allowed
            .iter()
            .map(|&a| (0..self.rho as u8).filter(|&c| a & (1 << c) != 0).collect())
            .collect();
        let mut pos = vec![0usize; self.k];
        let mut table: Vec<u8> = choices.iter().map(|c| c[0]).collect();
        let prefix: Vec<&[u8]> = chosen.iter().map(|&i| self.tables[i].as_slice()).collect();
        loop {
            self.classify(&prefix, &table, out);
            // odometer over the allowed sets, last column fastest
            let mut v = self.k;
            loop {
                if v == 0 {
                    return;
                }
                v -= 1;
                if pos[v] + 1 < choices[v].len() {
                    pos[v] += 1;
                    table[v] = choices[v][pos[v]];
                    break;
                }
                pos[v] = 0;
                table[v] = choices[v][0];
            }
        }
    }

    fn classify(&self, prefix: &[&[u8]], last: &[u8], out: &mut Partial) {
        out.valid += 1;
        let table = |x: usize| if x < prefix.len() { prefix[x] } else { last };
        let rho = self.rho;

        let pi: Vec<u8> = self.constants.iter().map(|&c| table(0)[c]).collect();
        let consistent = (1..self.m).all(|x| {
            self.constants
                .iter()
                .enumerate()
                .all(|(p, &c)| table(x)[c] == pi[p])
        });
        let bijective = pi.iter().fold(0u32, |acc, &c| acc | 1 << c).count_ones() as usize == rho;
        let gu = consistent && bijective;
        let identity = pi.iter().enumerate().all(|(p, &c)| p == c as usize);
        let unanimous = gu && identity;
        let sovereign =
            (0..self.m).all(|x| table(x).iter().fold(0u32, |acc, &c| acc | 1 << c) == self.full);
        let essential = gu
            && (0..self.n).any(|d| {
                (0..self.m).all(|x| {
                    let t = table(x);
                    (0..self.k).all(|v| t[v] == pi[self.digits[v * self.n + d] as usize])
                })
            });

        let c = &mut out.counts;
        c.unanimity += unanimous as u64;
        c.citizen_sovereignty += sovereign as u64;
        c.generalized_unanimity += gu as u64;
        c.essential_dictatorship += essential as u64;
        c.dictatorship += (essential && identity) as u64;

        if (!self.need_unanimity || unanimous)
            && (!self.need_sovereignty || sovereign)
            && (!self.need_gu || gu)
        {
            out.emitted
                .push((0..self.m).map(|x| table(x).to_vec()).collect());
        }
    }
}

/// Maps each code `v` to the code of `sigma^-1(v)`, for conjugating tables.
fn preimage_codes(params: &Params, sigma: &CategoryPermutation) -> Vec<usize> {
    let inverse = sigma.inverse();
    (0..params.table_len())
        .map(|code| {
            CategoryVector::decode_unchecked(params.n(), params.rho(), code)
                .map(&inverse)
                .encode(params)
        })
        .collect()
}

fn conjugate(table: &[u8], sigma: &CategoryPermutation, preimage: &[usize]) -> Vec<u8> {
    preimage
        .iter()
        .map(|&src| {
            sigma
                .apply(Category::from_index(table[src] as usize))
                .index() as u8
        })
        .collect()
}

fn raw_tables(params: &Params, constraint: TableConstraint) -> Vec<Vec<u8>> {
    let mut it =
        enumerate_elementary_cafs(params, constraint, Budget(u64::MAX)).expect("unbounded budget");
    std::iter::from_fn(|| it.next_raw()).collect()
}

/// Enumerates every valid independent CAF in the candidate space and emits
/// those satisfying `spec.required`, in lexicographic order of their
/// concatenated tables. Counts in the report cover the whole space.
pub fn enumerate_independent_cafs(spec: &SearchSpec) -> Result<SearchOutcome> {
    spec.validate()?;
    let started = Instant::now();
    let params = spec.params;
    let (n, m, rho) = (params.n(), params.m(), params.rho());
    let k = params.table_len();

    let per_object = count_elementary_cafs(&params, spec.constraint);
    let candidates = per_object.pow(m as u32);
    let budget = Budget(spec.budget);
    let space = ProfileSpace::new(&params, budget)?;

    let bytes = &per_object * BigUint::from(k);
    if bytes > BigUint::from(TABLE_MEMORY_LIMIT) {
        return Err(Error::BudgetExceeded {
            estimate: format!("{bytes} bytes of candidate tables"),
            budget: TABLE_MEMORY_LIMIT,
        });
    }
    let perms = CategoryPermutation::all(rho);
    let preimages: Vec<Vec<usize>> = perms.iter().map(|s| preimage_codes(&params, s)).collect();

    // work estimate: first-level tables, times the middle levels, times the profile scan
    let first_levels = if spec.prune_category_symmetry {
        let per_object = usize::try_from(&per_object).expect("bounded by memory limit");
        (per_object as u64).div_ceil(perms.len() as u64).max(1)
    } else {
        u64::try_from(&per_object).expect("bounded by memory limit")
    };
    let work_estimate = BigUint::from(first_levels)
        * per_object.pow(m.saturating_sub(2) as u32)
        * BigUint::from(space.len());
    budget.check(&work_estimate)?;

    let tables = raw_tables(&params, spec.constraint);
    let cols = space.column_codes();
    let mut digits = vec![0u8; k * n];
    for code in 0..k {
        let v = CategoryVector::decode_unchecked(n, rho, code);
        for i in 0..n {
            digits[code * n + i] = v.get(i).index() as u8;
        }
    }
    let engine = Engine {
        m,
        n,
        rho,
        k,
        full: if rho == 32 {
            u32::MAX
        } else {
            (1u32 << rho) - 1
        },
        profiles: space.len(),
        cols: &cols,
        tables: &tables,
        constants: constant_codes(&params),
        digits,
        constraint: spec.constraint,
        need_unanimity: spec.required.contains(&Axiom::Unanimity),
        need_sovereignty: spec.required.contains(&Axiom::CitizenSovereignty),
        need_gu: spec.required.contains(&Axiom::GeneralizedUnanimity),
    };

    // (first table index, orbit weight)
    let firsts: Vec<(usize, u64)> = if spec.prune_category_symmetry {
        tables
            .iter()
            .enumerate()
            .filter_map(|(i, t)| {
                let orbit: BTreeSet<Vec<u8>> = perms
                    .iter()
                    .zip(&preimages)
                    .map(|(s, pre)| conjugate(t, s, pre))
                    .collect();
                (orbit.first() == Some(t)).then_some((i, orbit.len() as u64))
            })
            .collect()
    } else {
        (0..tables.len()).map(|i| (i, 1)).collect()
    };

    let run = |&(first, _): &(usize, u64)| engine.run_subtree(first);
    let partials: Vec<Partial> = if spec.workers == 1 {
        firsts.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.workers)
            .build()
            .map_err(|e| Error::InvalidParams(format!("cannot start workers: {e}")))?;
        pool.install(|| firsts.par_iter().map(run).collect())
    };

    let mut nodes = 0;
    let mut valid = 0;
    let mut counts = AxiomCounts::default();
    let mut emitted_raw: Vec<Vec<Vec<u8>>> = Vec::new();
    for (partial, &(_, weight)) in partials.into_iter().zip(&firsts) {
        nodes += partial.nodes;
        valid += partial.valid * weight;
        counts.add_scaled(&partial.counts, weight);
        emitted_raw.extend(partial.emitted);
    }
    if spec.prune_category_symmetry {
        let mut full: BTreeSet<Vec<Vec<u8>>> = BTreeSet::new();
        for tuple in &emitted_raw {
            for (s, pre) in perms.iter().zip(&preimages) {
                full.insert(tuple.iter().map(|t| conjugate(t, s, pre)).collect());
            }
        }
        emitted_raw = full.into_iter().collect();
    }

    let mut hasher = Sha256::new();
    for tuple in &emitted_raw {
        for t in tuple {
            hasher.update(t);
        }
    }
    let emitted_digest = hex::encode(hasher.finalize());
    let cafs: Vec<IndependentCaf> = emitted_raw
        .iter()
        .map(|raw| IndependentCaf::from_raw(&params, raw))
        .collect();

    let census = census(&params, &emitted_raw);
    let report = SearchReport {
        params,
        constraint: spec.constraint,
        required: spec.required.iter().copied().collect(),
        pruned: spec.prune_category_symmetry,
        candidates,
        work_estimate,
        nodes_visited: nodes,
        valid_count: valid,
        axiom_counts: counts,
        emitted_count: cafs.len() as u64,
        emitted_digest,
        census,
        elapsed_ms: started.elapsed().as_millis() as u64,
    };
    Ok(SearchOutcome { report, cafs })
}

fn census(params: &Params, emitted: &[Vec<Vec<u8>>]) -> Vec<CensusEntry> {
    let (n, rho, m) = (params.n(), params.rho(), params.m());
    let mut entries = Vec::new();
    for d in 0..n {
        for pi in CategoryPermutation::all(rho) {
            let table: Vec<u8> = (0..params.table_len())
                .map(|code| {
                    let v = CategoryVector::decode_unchecked(n, rho, code);
                    pi.apply(v.get(d)).index() as u8
                })
                .collect();
            let tuple = vec![table; m];
            let found = emitted.binary_search(&tuple).is_ok();
            entries.push(CensusEntry {
                individual: Individual::from_index(d),
                permutation: pi,
                found,
                caf: found.then(|| IndependentCaf::from_raw(params, &tuple)),
            });
        }
    }
    entries
}

/// Table-level test for essential dictatorship: `alpha_x(v) = pi(v_d)` for
/// every object and every vector. Agrees with the profile-level check in
/// [`crate::axioms::check_essential_dictatorship`] because every single
/// column is attainable.
pub fn essential_dictator_by_tables(caf: &IndependentCaf) -> Option<EssentialDictator> {
    let params = caf.params_ref();
    let pi = CategoryPermutation::from_categories(
        params
            .categories()
            .map(|p| caf.object(0).on_constant(p))
            .collect(),
    )
    .ok()?;
    (0..params.n()).map(Individual::from_index).find_map(|d| {
        let ok = caf.tables().iter().all(|t| {
            (0..params.table_len()).all(|code| {
                let v = CategoryVector::decode_unchecked(params.n(), params.rho(), code);
                t.eval_code(code) == pi.apply(v.get(d.index()))
            })
        });
        ok.then(|| EssentialDictator {
            individual: d,
            permutation: pi.clone(),
        })
    })
}

/// The lexicographically smallest vector `k` with `alpha_y(k) = target`.
pub fn find_witness_vector(
    caf: &IndependentCaf,
    object: usize,
    target: Category,
) -> Result<CategoryVector> {
    let params = caf.params_ref();
    params.check_object(object)?;
    params.check_category(target.index())?;
    let table = caf.object(object);
    (0..params.table_len())
        .find(|&code| table.eval_code(code) == target)
        .map(|code| CategoryVector::decode_unchecked(params.n(), params.rho(), code))
        .ok_or(Error::NoWitness {
            object,
            category: target.index(),
        })
}
