//! CAF representations and decision procedures for the axioms.
//!
//! Every check returns an [`AxiomReport`]. A failing report always carries a
//! [`Witness`] that can be replayed against the CAF; a passing
//! citizen-sovereignty report carries one witness profile per
//! `(object, category)` pair.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    enumerate_classifications, extend_column, Budget, Category, CategoryNames, CategoryPermutation,
    CategoryVector, Classification, Individual, Params, Profile, ProfileSpace,
};
use crate::search::find_witness_vector;

/// A classification aggregation function, evaluated profile by profile.
///
/// `evaluate` returns the raw aggregate assignment. For a genuine CAF it is
/// always surjective; validity checking exists to find the profiles where it
/// is not.
pub trait Caf: Send + Sync {
    fn params(&self) -> Params;

    fn evaluate(&self, profile: &Profile) -> Vec<Category>;

    fn as_independent(&self) -> Option<&IndependentCaf> {
        None
    }
}

/// A total map from category vectors to categories, indexed by vector code.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementaryCaf {
    params: Params,
    table: Vec<Category>,
}

impl ElementaryCaf {
    pub fn new(params: &Params, table: Vec<Category>) -> Result<Self> {
        if table.len() != params.table_len() {
            return Err(Error::BadLength {
                expected: params.table_len(),
                got: table.len(),
            });
        }
        if let Some(bad) = table.iter().find(|c| c.index() >= params.rho()) {
            return Err(Error::BadCategory {
                index: bad.index(),
                rho: params.rho(),
            });
        }
        Ok(ElementaryCaf {
            params: *params,
            table,
        })
    }

    pub fn from_fn(
        params: &Params,
        mut f: impl FnMut(&CategoryVector) -> Category,
    ) -> Result<Self> {
        let table = (0..params.table_len())
            .map(|code| {
                f(&CategoryVector::decode_unchecked(
                    params.n(),
                    params.rho(),
                    code,
                ))
            })
            .collect();
        Self::new(params, table)
    }

    pub(crate) fn from_raw(params: &Params, raw: &[u8]) -> Self {
        debug_assert_eq!(raw.len(), params.table_len());
        ElementaryCaf {
            params: *params,
            table: raw
                .iter()
                .map(|&v| Category::from_index(v as usize))
                .collect(),
        }
    }

    pub fn constant(params: &Params, category: Category) -> Self {
        ElementaryCaf {
            params: *params,
            table: vec![category; params.table_len()],
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn table(&self) -> &[Category] {
        &self.table
    }

    pub fn eval(&self, vector: &CategoryVector) -> Category {
        self.table[vector.encode(&self.params)]
    }

    pub fn eval_code(&self, code: usize) -> Category {
        self.table[code]
    }

    /// Value on the constant vector `(p, ..., p)`.
    pub fn on_constant(&self, category: Category) -> Category {
        let code = CategoryVector::constant(&self.params, category).encode(&self.params);
        self.table[code]
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = 0u64;
        for c in &self.table {
            seen |= 1 << c.index();
        }
        seen.count_ones() as usize == self.params.rho()
    }
}

/// An m-tuple of elementary CAFs, one per object. The tuple is a genuine CAF
/// only if it passes [`check_validity`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndependentCaf {
    params: Params,
    tables: Vec<ElementaryCaf>,
}

impl IndependentCaf {
    pub fn new(params: &Params, tables: Vec<ElementaryCaf>) -> Result<Self> {
        if tables.len() != params.m() {
            return Err(Error::BadLength {
                expected: params.m(),
                got: tables.len(),
            });
        }
        if let Some(t) = tables.iter().find(|t| t.params != *params) {
            return Err(Error::Mismatch(format!(
                "table built for {} inside a CAF for {}",
                t.params, params
            )));
        }
        Ok(IndependentCaf {
            params: *params,
            tables,
        })
    }

    pub(crate) fn from_raw(params: &Params, raw: &[Vec<u8>]) -> Self {
        IndependentCaf {
            params: *params,
            tables: raw
                .iter()
                .map(|t| ElementaryCaf::from_raw(params, t))
                .collect(),
        }
    }

    pub fn params_ref(&self) -> &Params {
        &self.params
    }

    pub fn tables(&self) -> &[ElementaryCaf] {
        &self.tables
    }

    pub fn object(&self, object: usize) -> &ElementaryCaf {
        &self.tables[object]
    }

    /// `sigma · alpha`: relabel every input and output category by `sigma`,
    /// so that `(sigma · alpha)_x(v) = sigma(alpha_x(sigma^-1 v))`.
    pub fn relabel_categories(&self, sigma: &CategoryPermutation) -> IndependentCaf {
        let inverse = sigma.inverse();
        let params = self.params;
        let tables = self
            .tables
            .iter()
            .map(|t| {
                let table = (0..params.table_len())
                    .map(|code| {
                        let v = CategoryVector::decode_unchecked(params.n(), params.rho(), code);
                        sigma.apply(t.eval(&v.map(&inverse)))
                    })
                    .collect();
                ElementaryCaf { params, table }
            })
            .collect();
        IndependentCaf { params, tables }
    }

    /// Object relabeling: table `x` of the result is table `objects[x]` of `self`.
    pub fn relabel_objects(&self, objects: &[usize]) -> IndependentCaf {
        IndependentCaf {
            params: self.params,
            tables: objects.iter().map(|&x| self.tables[x].clone()).collect(),
        }
    }
}

impl Caf for IndependentCaf {
    fn params(&self) -> Params {
        self.params
    }

    fn evaluate(&self, profile: &Profile) -> Vec<Category> {
        let rho = self.params.rho();
        self.tables
            .iter()
            .enumerate()
            .map(|(x, t)| t.eval_code(profile.column_code(x, rho)))
            .collect()
    }

    fn as_independent(&self) -> Option<&IndependentCaf> {
        Some(self)
    }
}

/// The axioms this crate decides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Validity,
    Unanimity,
    CitizenSovereignty,
    Independence,
    GeneralizedUnanimity,
    EssentialDictatorship,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::Validity,
        Axiom::Unanimity,
        Axiom::CitizenSovereignty,
        Axiom::Independence,
        Axiom::GeneralizedUnanimity,
        Axiom::EssentialDictatorship,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Validity => "validity",
            Axiom::Unanimity => "unanimity",
            Axiom::CitizenSovereignty => "citizen-sovereignty",
            Axiom::Independence => "independence",
            Axiom::GeneralizedUnanimity => "generalized-unanimity",
            Axiom::EssentialDictatorship => "essential-dictatorship",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let axiom = match key.as_str() {
            "validity" => Axiom::Validity,
            "unanimity" => Axiom::Unanimity,
            "citizen-sovereignty" | "cs" | "sovereignty" => Axiom::CitizenSovereignty,
            "independence" => Axiom::Independence,
            "generalized-unanimity" | "gu" => Axiom::GeneralizedUnanimity,
            "essential-dictatorship" | "dictatorship" => Axiom::EssentialDictatorship,
            _ => return Err(Error::InvalidParams(format!("unknown axiom {s:?}"))),
        };
        Ok(axiom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SovereigntyWitness {
    pub object: usize,
    pub category: Category,
    pub profile: Profile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DictatorRefutation {
    pub individual: Individual,
    pub profile: Profile,
    pub aggregate: Vec<Category>,
    pub expected: Vec<Category>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// The aggregate of `profile` misses a category.
    NonSurjectiveAggregate {
        profile: Profile,
        aggregate: Vec<Category>,
    },
    /// `alpha(c, ..., c) != c`.
    UnanimityViolation {
        classification: Classification,
        aggregate: Vec<Category>,
    },
    /// Two profiles agree on `object` but the aggregates do not.
    IndependenceViolation {
        object: usize,
        first: Profile,
        second: Profile,
        first_output: Category,
        second_output: Category,
    },
    /// No profile sends `object` to `category`.
    Unreachable { object: usize, category: Category },
    /// One profile per `(object, category)` pair.
    SovereigntyTable { entries: Vec<SovereigntyWitness> },
    /// Unanimous profiles are not relabeled by a single permutation.
    GeneralizedUnanimityViolation {
        classifications: Vec<Classification>,
        aggregates: Vec<Vec<Category>>,
    },
    /// The permutation relabeling every unanimous profile.
    UnanimityPermutation { permutation: CategoryPermutation },
    /// The essential dictator and its permutation.
    EssentialDictator {
        individual: Individual,
        permutation: CategoryPermutation,
    },
    /// Why no `(d, pi)` works: either unanimous profiles already rule out
    /// every permutation, or each individual is refuted by a profile.
    NoEssentialDictator {
        permutation: Option<CategoryPermutation>,
        generalized_unanimity: Option<Box<Witness>>,
        refutations: Vec<DictatorRefutation>,
    },
}

impl Witness {
    /// One-line human rendering, with categories named by `names`.
    pub fn describe(&self, rho: usize, names: CategoryNames) -> String {
        let prof = |p: &Profile| {
            p.members()
                .iter()
                .map(|c| format!("[{}]", names.join(c.categories(), rho)))
                .collect::<Vec<_>>()
                .join(" ")
        };
        match self {
            Witness::NonSurjectiveAggregate { profile, aggregate } => format!(
                "profile {} aggregates to [{}], which is not surjective",
                prof(profile),
                names.join(aggregate, rho)
            ),
            Witness::UnanimityViolation {
                classification,
                aggregate,
            } => format!(
                "unanimous profile at [{}] aggregates to [{}]",
                names.join(classification.categories(), rho),
                names.join(aggregate, rho)
            ),
            Witness::IndependenceViolation {
                object,
                first,
                second,
                first_output,
                second_output,
            } => format!(
                "profiles {} and {} agree on object {} but put it in {} and {}",
                prof(first),
                prof(second),
                object,
                names.name(*first_output, rho),
                names.name(*second_output, rho)
            ),
            Witness::Unreachable { object, category } => format!(
                "no profile puts object {} in {}",
                object,
                names.name(*category, rho)
            ),
            Witness::SovereigntyTable { entries } => {
                format!("{} (object, category) pairs reached", entries.len())
            }
            Witness::GeneralizedUnanimityViolation {
                classifications,
                aggregates,
            } => {
                let parts: Vec<_> = classifications
                    .iter()
                    .zip(aggregates)
                    .map(|(c, a)| {
                        format!(
                            "[{}] -> [{}]",
                            names.join(c.categories(), rho),
                            names.join(a, rho)
                        )
                    })
                    .collect();
                format!(
                    "unanimous profiles are not relabeled by one permutation: {}",
                    parts.join("; ")
                )
            }
            Witness::UnanimityPermutation { permutation } => format!(
                "unanimous profiles are relabeled by {}",
                permutation.render(names)
            ),
            Witness::EssentialDictator {
                individual,
                permutation,
            } => format!(
                "individual {} is an essential dictator with permutation {}",
                individual,
                permutation.render(names)
            ),
            Witness::NoEssentialDictator {
                generalized_unanimity,
                refutations,
                ..
            } => match generalized_unanimity {
                Some(w) => format!("no essential dictator: {}", w.describe(rho, names)),
                None => format!(
                    "no essential dictator: each of {} individuals refuted by a profile",
                    refutations.len()
                ),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl AxiomReport {
    fn pass(axiom: Axiom, witness: Option<Witness>) -> Self {
        AxiomReport {
            axiom,
            passed: true,
            witness,
        }
    }

    fn fail(axiom: Axiom, witness: Witness) -> Self {
        AxiomReport {
            axiom,
            passed: false,
            witness: Some(witness),
        }
    }
}

fn is_surjective(rho: usize, assignment: &[Category]) -> bool {
    let mut seen = 0u64;
    for c in assignment {
        seen |= 1 << c.index();
    }
    seen.count_ones() as usize == rho
}

/// Passes iff every profile aggregates to a surjective assignment.
pub fn check_validity(caf: &dyn Caf, budget: Budget) -> Result<AxiomReport> {
    let params = caf.params();
    let space = ProfileSpace::new(&params, budget)?;
    if let Some(ind) = caf.as_independent() {
        let m = params.m();
        let codes = space.column_codes();
        for p in 0..space.len() {
            let mut seen = 0u64;
            for x in 0..m {
                seen |= 1 << ind.tables[x].table[codes[p * m + x] as usize].index();
            }
            if seen.count_ones() as usize != params.rho() {
                let profile = space.profile(p);
                let aggregate = caf.evaluate(&profile);
                return Ok(AxiomReport::fail(
                    Axiom::Validity,
                    Witness::NonSurjectiveAggregate { profile, aggregate },
                ));
            }
        }
        return Ok(AxiomReport::pass(Axiom::Validity, None));
    }
    for profile in space.iter() {
        let aggregate = caf.evaluate(&profile);
        if !is_surjective(params.rho(), &aggregate) {
            return Ok(AxiomReport::fail(
                Axiom::Validity,
                Witness::NonSurjectiveAggregate { profile, aggregate },
            ));
        }
    }
    Ok(AxiomReport::pass(Axiom::Validity, None))
}

/// Passes iff `alpha(c, ..., c) = c` for every classification `c`.
pub fn check_unanimity(caf: &dyn Caf) -> AxiomReport {
    let params = caf.params();
    for c in enumerate_classifications(&params) {
        let aggregate = caf.evaluate(&Profile::unanimous(&params, &c));
        if aggregate != c.categories() {
            return AxiomReport::fail(
                Axiom::Unanimity,
                Witness::UnanimityViolation {
                    classification: c,
                    aggregate,
                },
            );
        }
    }
    AxiomReport::pass(Axiom::Unanimity, None)
}

/// Passes iff every `(object, category)` pair is reached by some profile.
///
/// Independent CAFs are searched column-first: the smallest vector `k` with
/// `alpha_x(k) = p` is extended to a profile. General CAFs are scanned in
/// profile order and the first hit is kept.
pub fn check_citizen_sovereignty(caf: &dyn Caf, budget: Budget) -> Result<AxiomReport> {
    let params = caf.params();
    let mut entries = Vec::with_capacity(params.m() * params.rho());
    if let Some(ind) = caf.as_independent() {
        for x in 0..params.m() {
            for p in params.categories() {
                match find_witness_vector(ind, x, p) {
                    Ok(k) => entries.push(SovereigntyWitness {
                        object: x,
                        category: p,
                        profile: extend_column(&params, x, &k)?,
                    }),
                    Err(Error::NoWitness { .. }) => {
                        return Ok(AxiomReport::fail(
                            Axiom::CitizenSovereignty,
                            Witness::Unreachable {
                                object: x,
                                category: p,
                            },
                        ))
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    } else {
        let (m, rho) = (params.m(), params.rho());
        let space = ProfileSpace::new(&params, budget)?;
        let mut found: Vec<Option<Profile>> = vec![None; m * rho];
        let mut remaining = m * rho;
        for profile in space.iter() {
            let aggregate = caf.evaluate(&profile);
            for (x, p) in aggregate.iter().enumerate() {
                let slot = &mut found[x * rho + p.index()];
                if slot.is_none() {
                    *slot = Some(profile.clone());
                    remaining -= 1;
                }
            }
            if remaining == 0 {
                break;
            }
        }
        for x in 0..m {
            for p in params.categories() {
                match found[x * rho + p.index()].take() {
                    Some(profile) => entries.push(SovereigntyWitness {
                        object: x,
                        category: p,
                        profile,
                    }),
                    None => {
                        return Ok(AxiomReport::fail(
                            Axiom::CitizenSovereignty,
                            Witness::Unreachable {
                                object: x,
                                category: p,
                            },
                        ))
                    }
                }
            }
        }
    }
    Ok(AxiomReport::pass(
        Axiom::CitizenSovereignty,
        Some(Witness::SovereigntyTable { entries }),
    ))
}

/// Result of [`check_independence`]: the verdict, and on a pass the induced
/// per-object tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceOutcome {
    pub report: AxiomReport,
    pub induced: Option<IndependentCaf>,
}

/// Tests a single pair of profiles: a witness if they agree on some object
/// whose aggregate category differs.
pub fn independence_violation(caf: &dyn Caf, first: &Profile, second: &Profile) -> Option<Witness> {
    let (a, b) = (caf.evaluate(first), caf.evaluate(second));
    (0..caf.params().m()).find_map(|x| {
        let same = first
            .members()
            .iter()
            .zip(second.members())
            .all(|(c, d)| c.get(x) == d.get(x));
        (same && a[x] != b[x]).then(|| Witness::IndependenceViolation {
            object: x,
            first: first.clone(),
            second: second.clone(),
            first_output: a[x],
            second_output: b[x],
        })
    })
}

/// Scans all of `C^N`, bucketing outputs by `(object, column)`.
///
/// Every single column is attainable when `m >= rho`, so on a pass the
/// induced tables are total.
pub fn check_independence(caf: &dyn Caf, budget: Budget) -> Result<IndependenceOutcome> {
    let params = caf.params();
    let (m, rho) = (params.m(), params.rho());
    let space = ProfileSpace::new(&params, budget)?;
    let codes = space.column_codes();
    let k = params.table_len();
    // (output, first profile index) per (object, column code)
    let mut seen: Vec<Option<(Category, usize)>> = vec![None; m * k];
    for p in 0..space.len() {
        let profile = space.profile(p);
        let aggregate = caf.evaluate(&profile);
        for x in 0..m {
            let slot = &mut seen[x * k + codes[p * m + x] as usize];
            match *slot {
                None => *slot = Some((aggregate[x], p)),
                Some((out, first)) if out != aggregate[x] => {
                    return Ok(IndependenceOutcome {
                        report: AxiomReport::fail(
                            Axiom::Independence,
                            Witness::IndependenceViolation {
                                object: x,
                                first: space.profile(first),
                                second: profile,
                                first_output: out,
                                second_output: aggregate[x],
                            },
                        ),
                        induced: None,
                    });
                }
                Some(_) => {}
            }
        }
    }
    let induced = (0..m)
        .map(|x| {
            seen[x * k..(x + 1) * k]
                .iter()
                .map(|slot| slot.map(|(c, _)| c))
                .collect::<Option<Vec<_>>>()
                .map(|table| ElementaryCaf { params, table })
        })
        .collect::<Option<Vec<_>>>()
        .map(|tables| IndependentCaf { params, tables });
    debug_assert!(induced.is_some() || rho > m);
    Ok(IndependenceOutcome {
        report: AxiomReport::pass(Axiom::Independence, None),
        induced,
    })
}

fn generalized_unanimity(caf: &dyn Caf) -> std::result::Result<CategoryPermutation, Witness> {
    let params = caf.params();
    let rho = params.rho();
    // image[p] with the classification that fixed it
    let mut image: Vec<Option<(Category, Classification, Vec<Category>)>> = vec![None; rho];
    for c in enumerate_classifications(&params) {
        let aggregate = caf.evaluate(&Profile::unanimous(&params, &c));
        for (x, &out) in aggregate.iter().enumerate() {
            let p = c.get(x).index();
            match &image[p] {
                None => image[p] = Some((out, c.clone(), aggregate.clone())),
                Some((prev, first, first_agg)) if *prev != out => {
                    let (mut classifications, mut aggregates) =
                        (vec![first.clone()], vec![first_agg.clone()]);
                    if *first != c {
                        classifications.push(c.clone());
                        aggregates.push(aggregate.clone());
                    }
                    return Err(Witness::GeneralizedUnanimityViolation {
                        classifications,
                        aggregates,
                    });
                }
                Some(_) => {}
            }
        }
    }
    let entries: Vec<_> = image
        .into_iter()
        .map(|e| e.expect("m >= rho covers every category"))
        .collect();
    let images: Vec<Category> = entries.iter().map(|e| e.0).collect();
    CategoryPermutation::from_categories(images).map_err(|_| {
        // two categories collapse: the unanimous profiles that fixed them
        let mut seen: Vec<Option<usize>> = vec![None; rho];
        let mut pair = (0, 0);
        for (p, e) in entries.iter().enumerate() {
            let slot = &mut seen[e.0.index()];
            if let Some(q) = *slot {
                pair = (q, p);
                break;
            }
            *slot = Some(p);
        }
        let mut classifications = vec![entries[pair.0].1.clone()];
        let mut aggregates = vec![entries[pair.0].2.clone()];
        if entries[pair.1].1 != entries[pair.0].1 {
            classifications.push(entries[pair.1].1.clone());
            aggregates.push(entries[pair.1].2.clone());
        }
        Witness::GeneralizedUnanimityViolation {
            classifications,
            aggregates,
        }
    })
}

/// Returns `pi` if `alpha(c, ..., c) = pi ∘ c` for every classification `c`.
pub fn check_generalized_unanimity(caf: &dyn Caf) -> Option<CategoryPermutation> {
    generalized_unanimity(caf).ok()
}

pub fn generalized_unanimity_report(caf: &dyn Caf) -> AxiomReport {
    match generalized_unanimity(caf) {
        Ok(permutation) => AxiomReport::pass(
            Axiom::GeneralizedUnanimity,
            Some(Witness::UnanimityPermutation { permutation }),
        ),
        Err(w) => AxiomReport::fail(Axiom::GeneralizedUnanimity, w),
    }
}

/// An essential dictator `d` together with the permutation `pi` such that
/// `alpha(c) = pi ∘ c_d` on every profile.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EssentialDictator {
    pub individual: Individual,
    pub permutation: CategoryPermutation,
}

impl EssentialDictator {
    pub fn is_dictatorship(&self) -> bool {
        self.permutation.is_identity()
    }
}

fn essential_dictatorship(
    caf: &dyn Caf,
    budget: Budget,
) -> Result<std::result::Result<EssentialDictator, Witness>> {
    let params = caf.params();
    let pi = match generalized_unanimity(caf) {
        Ok(pi) => pi,
        Err(w) => {
            return Ok(Err(Witness::NoEssentialDictator {
                permutation: None,
                generalized_unanimity: Some(Box::new(w)),
                refutations: vec![],
            }))
        }
    };
    let space = ProfileSpace::new(&params, budget)?;
    let mut refutations = Vec::new();
    let mut found = Vec::new();
    for d in (0..params.n()).map(Individual::from_index) {
        let refuted = space.iter().find_map(|profile| {
            let aggregate = caf.evaluate(&profile);
            let expected: Vec<Category> = profile
                .member(d)
                .categories()
                .iter()
                .map(|&c| pi.apply(c))
                .collect();
            (aggregate != expected).then_some(DictatorRefutation {
                individual: d,
                profile,
                aggregate,
                expected,
            })
        });
        match refuted {
            Some(r) => refutations.push(r),
            None => found.push(d),
        }
    }
    match found.as_slice() {
        [d] => Ok(Ok(EssentialDictator {
            individual: *d,
            permutation: pi,
        })),
        [] => Ok(Err(Witness::NoEssentialDictator {
            permutation: Some(pi),
            generalized_unanimity: None,
            refutations,
        })),
        _ => Err(Error::VerificationFailed(format!(
            "individuals {found:?} are all essential dictators"
        ))),
    }
}

/// Finds the unique `(d, pi)` with `alpha(c) = pi ∘ c_d` for every profile,
/// confirming the identity on the whole profile space.
pub fn check_essential_dictatorship(
    caf: &dyn Caf,
    budget: Budget,
) -> Result<Option<EssentialDictator>> {
    Ok(essential_dictatorship(caf, budget)?.ok())
}

pub fn essential_dictatorship_report(caf: &dyn Caf, budget: Budget) -> Result<AxiomReport> {
    Ok(match essential_dictatorship(caf, budget)? {
        Ok(ed) => AxiomReport::pass(
            Axiom::EssentialDictatorship,
            Some(Witness::EssentialDictator {
                individual: ed.individual,
                permutation: ed.permutation,
            }),
        ),
        Err(w) => AxiomReport::fail(Axiom::EssentialDictatorship, w),
    })
}

/// Runs each requested axiom once, in the order given, skipping duplicates.
pub fn check_axioms(caf: &dyn Caf, axioms: &[Axiom], budget: Budget) -> Result<Vec<AxiomReport>> {
    let mut done = BTreeSet::new();
    let mut reports = Vec::new();
    for &axiom in axioms {
        if !done.insert(axiom) {
            continue;
        }
        reports.push(match axiom {
            Axiom::Validity => check_validity(caf, budget)?,
            Axiom::Unanimity => check_unanimity(caf),
            Axiom::CitizenSovereignty => check_citizen_sovereignty(caf, budget)?,
            Axiom::Independence => check_independence(caf, budget)?.report,
            Axiom::GeneralizedUnanimity => generalized_unanimity_report(caf),
            Axiom::EssentialDictatorship => essential_dictatorship_report(caf, budget)?,
        });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{
        make_dictatorship, make_essential_dictatorship, make_per_object_majority, table1_plurality,
        table1_profiles,
    };

    fn cat(i: usize) -> Category {
        Category::from_index(i)
    }

    fn swap() -> CategoryPermutation {
        CategoryPermutation::new(&[1, 0]).unwrap()
    }

    fn dictator(params: &Params, d: usize) -> IndependentCaf {
        make_dictatorship(params, Individual::from_index(d))
            .unwrap()
            .to_independent()
    }

    #[test]
    fn validity_examples() {
        let p = Params::new(2, 3, 2).unwrap();
        assert!(
            check_validity(&dictator(&p, 0), Budget::default())
                .unwrap()
                .passed
        );

        let p = Params::new(3, 3, 2).unwrap();
        let majority = make_per_object_majority(&p, cat(0)).unwrap();
        let report = check_validity(&majority, Budget::default()).unwrap();
        assert!(!report.passed);
        match report.witness.unwrap() {
            Witness::NonSurjectiveAggregate { profile, aggregate } => {
                let rows: Vec<Vec<usize>> = profile
                    .members()
                    .iter()
                    .map(|c| c.categories().iter().map(|c| c.index()).collect())
                    .collect();
                assert_eq!(rows, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
                assert_eq!(aggregate, vec![cat(0); 3]);
            }
            other => panic!("unexpected witness {other:?}"),
        }

        let p = Params::new(2, 2, 2).unwrap();
        let split = IndependentCaf::new(
            &p,
            vec![
                ElementaryCaf::constant(&p, cat(0)),
                ElementaryCaf::constant(&p, cat(1)),
            ],
        )
        .unwrap();
        assert!(check_validity(&split, Budget::default()).unwrap().passed);
    }

    #[test]
    fn validity_respects_budget() {
        let p = Params::new(3, 3, 2).unwrap();
        let err = check_validity(&dictator(&p, 0), Budget(10)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn unanimity_examples() {
        assert!(check_unanimity(&table1_plurality()).passed);
        let p = Params::new(2, 3, 2).unwrap();
        assert!(check_unanimity(&dictator(&p, 0)).passed);

        let ed = make_essential_dictatorship(&p, Individual::from_index(0), swap()).unwrap();
        let report = check_unanimity(&ed);
        assert!(!report.passed);
        // canonical witness is the smallest classification, [p, p, q]
        match report.witness.unwrap() {
            Witness::UnanimityViolation {
                classification,
                aggregate,
            } => {
                assert_eq!(classification.categories(), &[cat(0), cat(0), cat(1)]);
                assert_eq!(aggregate, vec![cat(1), cat(1), cat(0)]);
            }
            other => panic!("unexpected witness {other:?}"),
        }
        let c = Classification::new(&p, &[0, 1, 1]).unwrap();
        assert_eq!(
            ed.evaluate(&Profile::unanimous(&p, &c)),
            vec![cat(1), cat(0), cat(0)]
        );
    }

    #[test]
    fn sovereignty_examples() {
        let p = Params::new(2, 3, 2).unwrap();
        for caf in [
            dictator(&p, 1),
            make_essential_dictatorship(&p, Individual::from_index(0), swap())
                .unwrap()
                .to_independent(),
        ] {
            let report = check_citizen_sovereignty(&caf, Budget::default()).unwrap();
            assert!(report.passed);
            let Some(Witness::SovereigntyTable { entries }) = report.witness else {
                panic!("pass must carry the witness table");
            };
            assert_eq!(entries.len(), 6);
            for e in entries {
                assert_eq!(caf.evaluate(&e.profile)[e.object], e.category);
            }
        }

        let mut tables = dictator(&p, 0).tables().to_vec();
        tables[0] = ElementaryCaf::constant(&p, cat(0));
        let stuck = IndependentCaf::new(&p, tables).unwrap();
        let report = check_citizen_sovereignty(&stuck, Budget::default()).unwrap();
        assert_eq!(
            report.witness,
            Some(Witness::Unreachable {
                object: 0,
                category: cat(1)
            })
        );
    }

    #[test]
    fn sovereignty_on_a_general_caf_agrees() {
        let report = check_citizen_sovereignty(&table1_plurality(), Budget::default()).unwrap();
        assert!(report.passed);
    }

    #[test]
    fn independence_examples() {
        let plurality = table1_plurality();
        let outcome = check_independence(&plurality, Budget::default()).unwrap();
        assert!(!outcome.report.passed);
        let Some(Witness::IndependenceViolation {
            object,
            first,
            second,
            first_output,
            second_output,
        }) = outcome.report.witness
        else {
            panic!("expected an independence witness");
        };
        assert_eq!(
            first.column(object).unwrap(),
            second.column(object).unwrap()
        );
        assert_eq!(plurality.evaluate(&first)[object], first_output);
        assert_eq!(plurality.evaluate(&second)[object], second_output);
        assert_ne!(first_output, second_output);

        let (c, c_prime) = table1_profiles();
        match independence_violation(&plurality, &c, &c_prime) {
            Some(Witness::IndependenceViolation { object, .. }) => assert_eq!(object, 0),
            other => panic!("unexpected {other:?}"),
        }

        let p = Params::new(2, 3, 2).unwrap();
        let caf = dictator(&p, 1);
        let outcome = check_independence(&caf, Budget::default()).unwrap();
        assert!(outcome.report.passed);
        assert_eq!(outcome.induced, Some(caf));
    }

    #[test]
    fn generalized_unanimity_examples() {
        let p = Params::new(2, 3, 2).unwrap();
        assert_eq!(
            check_generalized_unanimity(&dictator(&p, 0)),
            Some(CategoryPermutation::identity(2))
        );
        let ed = make_essential_dictatorship(&p, Individual::from_index(1), swap()).unwrap();
        assert_eq!(check_generalized_unanimity(&ed), Some(swap()));

        let p = Params::new(3, 3, 2).unwrap();
        let mut tables = make_per_object_majority(&p, cat(0))
            .unwrap()
            .tables()
            .to_vec();
        tables[0] = ElementaryCaf::constant(&p, cat(0));
        let odd = IndependentCaf::new(&p, tables).unwrap();
        assert_eq!(check_generalized_unanimity(&odd), None);
        let report = generalized_unanimity_report(&odd);
        assert!(!report.passed && report.witness.is_some());
    }

    #[test]
    fn essential_dictatorship_examples() {
        let p = Params::new(2, 3, 2).unwrap();
        let found = check_essential_dictatorship(&dictator(&p, 0), Budget::default())
            .unwrap()
            .unwrap();
        assert_eq!(found.individual, Individual::from_index(0));
        assert!(found.is_dictatorship());

        let ed = make_essential_dictatorship(&p, Individual::from_index(1), swap()).unwrap();
        let found = check_essential_dictatorship(&ed, Budget::default())
            .unwrap()
            .unwrap();
        assert_eq!((found.individual.number(), found.permutation), (2, swap()));

        assert_eq!(
            check_essential_dictatorship(&table1_plurality(), Budget::default()).unwrap(),
            None
        );
        let report = essential_dictatorship_report(&table1_plurality(), Budget::default()).unwrap();
        assert!(!report.passed);
    }

    #[test]
    fn axiom_names_parse() {
        for a in Axiom::ALL {
            assert_eq!(a.name().parse::<Axiom>().unwrap(), a);
        }
        assert_eq!("cs".parse::<Axiom>().unwrap(), Axiom::CitizenSovereignty);
        assert!("anonymity".parse::<Axiom>().is_err());
    }

    #[test]
    fn relabeling_round_trips() {
        let p = Params::new(2, 3, 3).unwrap();
        let caf = dictator(&p, 0);
        let sigma = CategoryPermutation::new(&[2, 0, 1]).unwrap();
        let there = caf.relabel_categories(&sigma);
        assert_eq!(there, caf, "a dictatorship is invariant under relabeling");
        let odd = make_essential_dictatorship(&p, Individual::from_index(1), sigma.clone())
            .unwrap()
            .to_independent();
        let back = odd
            .relabel_categories(&sigma)
            .relabel_categories(&sigma.inverse());
        assert_eq!(back, odd);
        assert_eq!(
            odd.relabel_objects(&[2, 1, 0]).relabel_objects(&[2, 1, 0]),
            odd
        );
    }
}
