//! Concrete CAFs: essential dictatorships, plurality with an exogenous
//! tie-break order, and per-object majority.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::axioms::{Caf, ElementaryCaf, IndependentCaf};
use crate::error::{Error, Result};
use crate::model::{
    enumerate_classifications, Category, CategoryPermutation, Classification, Individual, Params,
    Profile,
};

/// `alpha(c) = pi ∘ c_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialDictatorship {
    params: Params,
    individual: Individual,
    pi: CategoryPermutation,
}

impl EssentialDictatorship {
    pub fn individual(&self) -> Individual {
        self.individual
    }

    pub fn permutation(&self) -> &CategoryPermutation {
        &self.pi
    }

    /// The same rule as an m-tuple of tables, `alpha_x(v) = pi(v_d)`.
    pub fn to_independent(&self) -> IndependentCaf {
        let d = self.individual.index();
        let table = ElementaryCaf::from_fn(&self.params, |v| self.pi.apply(v.get(d)))
            .expect("projection tables are in range");
        IndependentCaf::new(&self.params, vec![table; self.params.m()])
            .expect("tables share params")
    }
}

impl Caf for EssentialDictatorship {
    fn params(&self) -> Params {
        self.params
    }

    fn evaluate(&self, profile: &Profile) -> Vec<Category> {
        profile
            .member(self.individual)
            .categories()
            .iter()
            .map(|&c| self.pi.apply(c))
            .collect()
    }
}

pub fn make_essential_dictatorship(
    params: &Params,
    individual: Individual,
    pi: CategoryPermutation,
) -> Result<EssentialDictatorship> {
    params.check_individual(individual)?;
    if pi.rho() != params.rho() {
        return Err(Error::Mismatch(format!(
            "permutation on {} categories for rho = {}",
            pi.rho(),
            params.rho()
        )));
    }
    Ok(EssentialDictatorship {
        params: *params,
        individual,
        pi,
    })
}

pub fn make_dictatorship(params: &Params, individual: Individual) -> Result<EssentialDictatorship> {
    make_essential_dictatorship(
        params,
        individual,
        CategoryPermutation::identity(params.rho()),
    )
}

/// A total order on the classifications, highest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieBreakOrder {
    order: Vec<Classification>,
}

impl TieBreakOrder {
    pub fn new(params: &Params, order: Vec<Classification>) -> Result<Self> {
        let mut expected: Vec<_> = enumerate_classifications(params).collect();
        let mut given = order.clone();
        expected.sort();
        given.sort();
        if given != expected {
            return Err(Error::InvalidParams(
                "tie-break order must list every classification exactly once".into(),
            ));
        }
        Ok(TieBreakOrder { order })
    }

    /// Descending lexicographic order of assignment sequences.
    pub fn descending(params: &Params) -> Self {
        let mut order: Vec<_> = enumerate_classifications(params).collect();
        order.reverse();
        TieBreakOrder { order }
    }

    /// `top` first, then the rest in descending lexicographic order.
    pub fn with_maximal(params: &Params, top: &Classification) -> Result<Self> {
        let mut order = Self::descending(params).order;
        let pos = order.iter().position(|c| c == top).ok_or_else(|| {
            Error::InvalidParams(format!("{top} is not a classification for {params}"))
        })?;
        let top = order.remove(pos);
        order.insert(0, top);
        Ok(TieBreakOrder { order })
    }

    pub fn order(&self) -> &[Classification] {
        &self.order
    }
}

/// Plurality over whole classifications; ties go to the highest classification
/// in the tie-break order.
#[derive(Clone, Debug)]
pub struct Plurality {
    params: Params,
    order: TieBreakOrder,
    rank: HashMap<Classification, usize>,
}

impl Plurality {
    pub fn order(&self) -> &TieBreakOrder {
        &self.order
    }

    pub fn winner(&self, profile: &Profile) -> Classification {
        let mut votes: HashMap<&Classification, usize> = HashMap::new();
        for c in profile.members() {
            *votes.entry(c).or_default() += 1;
        }
        let best = votes.values().copied().max().unwrap_or(0);
        votes
            .into_iter()
            .filter(|&(_, v)| v == best)
            .map(|(c, _)| c)
            .min_by_key(|c| self.rank[*c])
            .expect("profiles are non-empty")
            .clone()
    }
}

impl Caf for Plurality {
    fn params(&self) -> Params {
        self.params
    }

    fn evaluate(&self, profile: &Profile) -> Vec<Category> {
        self.winner(profile).categories().to_vec()
    }
}

pub fn make_plurality(params: &Params, order: TieBreakOrder) -> Result<Plurality> {
    let order = TieBreakOrder::new(params, order.order)?;
    let rank = order
        .order
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    Ok(Plurality {
        params: *params,
        order,
        rank,
    })
}

/// Three individuals, objects `x, y, z`, categories `p, q`.
pub fn table1_params() -> Params {
    Params::new(3, 3, 2).expect("valid sizes")
}

/// The classification `x ↦ p, y ↦ q, z ↦ q`, maximal in the fixture order.
pub fn table1_top() -> Classification {
    Classification::new(&table1_params(), &[0, 1, 1]).expect("surjective")
}

pub fn table1_order() -> TieBreakOrder {
    TieBreakOrder::with_maximal(&table1_params(), &table1_top()).expect("top is a classification")
}

pub fn table1_plurality() -> Plurality {
    make_plurality(&table1_params(), table1_order()).expect("order covers C")
}

/// The two profiles shown for plurality: they agree on object `x`.
pub fn table1_profiles() -> (Profile, Profile) {
    let params = table1_params();
    let c = |v: &[usize]| Classification::new(&params, v).expect("surjective");
    let first = Profile::new(&params, vec![c(&[0, 1, 1]), c(&[1, 0, 1]), c(&[1, 1, 0])])
        .expect("three members");
    let second = Profile::new(&params, vec![c(&[0, 1, 1]), c(&[1, 1, 0]), c(&[1, 1, 0])])
        .expect("three members");
    (first, second)
}

/// Per-object majority for two categories, ties to `tie`. Not a valid CAF in
/// general; [`crate::axioms::check_validity`] finds the failing profiles.
pub fn make_per_object_majority(params: &Params, tie: Category) -> Result<IndependentCaf> {
    if params.rho() != 2 {
        return Err(Error::InvalidParams(format!(
            "per-object majority needs rho = 2, got {}",
            params.rho()
        )));
    }
    params.check_category(tie.index())?;
    let table = ElementaryCaf::from_fn(params, |v| {
        let ones = v.entries().iter().filter(|c| c.index() == 1).count();
        let zeros = v.len() - ones;
        match ones.cmp(&zeros) {
            std::cmp::Ordering::Greater => Category::from_index(1),
            std::cmp::Ordering::Less => Category::from_index(0),
            std::cmp::Ordering::Equal => tie,
        }
    })?;
    IndependentCaf::new(params, vec![table; params.m()])
}

/// A named rule, as written on the command line and in rule documents:
/// `plurality-table1`, `plurality`, `dictator:<d>`, `essential:<d>:<perm>`,
/// `majority` or `majority:tie=<p>`.
///
/// Individuals are one-based. A permutation is `id`, `swap` (two categories)
/// or a dot-separated image list such as `1.2.0`. Categories are given as an
/// index or, for two categories, as `p`/`q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleSpec {
    PluralityTable1,
    Plurality,
    Dictator(Individual),
    Essential(Individual, PermutationSpec),
    Majority(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermutationSpec {
    Identity,
    Swap,
    Images(Vec<usize>),
}

impl PermutationSpec {
    pub fn build(&self, rho: usize) -> Result<CategoryPermutation> {
        match self {
            PermutationSpec::Identity => Ok(CategoryPermutation::identity(rho)),
            PermutationSpec::Swap if rho == 2 => CategoryPermutation::new(&[1, 0]),
            PermutationSpec::Swap => Err(Error::InvalidParams(
                "`swap` needs exactly two categories".into(),
            )),
            PermutationSpec::Images(images) if images.len() == rho => {
                CategoryPermutation::new(images)
            }
            PermutationSpec::Images(images) => Err(Error::BadLength {
                expected: rho,
                got: images.len(),
            }),
        }
    }
}

impl fmt::Display for PermutationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermutationSpec::Identity => f.write_str("id"),
            PermutationSpec::Swap => f.write_str("swap"),
            PermutationSpec::Images(images) => {
                let parts: Vec<_> = images.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join("."))
            }
        }
    }
}

fn parse_category(s: &str) -> Result<usize> {
    match s {
        "p" => Ok(0),
        "q" => Ok(1),
        _ => s
            .strip_prefix('p')
            .and_then(|rest| rest.parse::<usize>().ok())
            .filter(|&v| v >= 1)
            .map(|v| v - 1)
            .or_else(|| s.parse().ok())
            .ok_or_else(|| Error::InvalidParams(format!("cannot read category {s:?}"))),
    }
}

fn parse_individual(s: &str) -> Result<Individual> {
    let number: usize = s
        .parse()
        .map_err(|_| Error::InvalidParams(format!("cannot read individual {s:?}")))?;
    Individual::from_number(number)
}

impl FromStr for RuleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["plurality-table1"] => Ok(RuleSpec::PluralityTable1),
            ["plurality"] => Ok(RuleSpec::Plurality),
            ["dictator", d] => Ok(RuleSpec::Dictator(parse_individual(d)?)),
            ["essential", d, perm] => {
                let perm = match *perm {
                    "id" | "identity" => PermutationSpec::Identity,
                    "swap" => PermutationSpec::Swap,
                    images => PermutationSpec::Images(
                        images
                            .split('.')
                            .map(|v| {
                                v.parse().map_err(|_| {
                                    Error::InvalidParams(format!(
                                        "cannot read permutation {images:?}"
                                    ))
                                })
                            })
                            .collect::<Result<_>>()?,
                    ),
                };
                Ok(RuleSpec::Essential(parse_individual(d)?, perm))
            }
            ["majority"] => Ok(RuleSpec::Majority(0)),
            ["majority", tie] => {
                let value = tie.strip_prefix("tie=").ok_or_else(|| {
                    Error::InvalidParams(format!("expected `tie=<category>`, got {tie:?}"))
                })?;
                Ok(RuleSpec::Majority(parse_category(value)?))
            }
            _ => Err(Error::InvalidParams(format!("unknown rule {s:?}"))),
        }
    }
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleSpec::PluralityTable1 => f.write_str("plurality-table1"),
            RuleSpec::Plurality => f.write_str("plurality"),
            RuleSpec::Dictator(d) => write!(f, "dictator:{d}"),
            RuleSpec::Essential(d, perm) => write!(f, "essential:{d}:{perm}"),
            RuleSpec::Majority(tie) => write!(f, "majority:tie={tie}"),
        }
    }
}

/// A rule instantiated for concrete sizes.
#[derive(Clone, Debug)]
pub enum BuiltRule {
    Independent(IndependentCaf),
    Essential(EssentialDictatorship),
    Plurality(Plurality),
}

impl BuiltRule {
    pub fn caf(&self) -> &dyn Caf {
        match self {
            BuiltRule::Independent(c) => c,
            BuiltRule::Essential(c) => c,
            BuiltRule::Plurality(c) => c,
        }
    }

    /// Table form, when the rule is independent by construction.
    pub fn independent(&self) -> Option<IndependentCaf> {
        match self {
            BuiltRule::Independent(c) => Some(c.clone()),
            BuiltRule::Essential(c) => Some(c.to_independent()),
            BuiltRule::Plurality(_) => None,
        }
    }
}

impl RuleSpec {
    /// Sizes the rule is pinned to, if any.
    pub fn fixed_params(&self) -> Option<Params> {
        matches!(self, RuleSpec::PluralityTable1).then(table1_params)
    }

    pub fn build(&self, params: &Params) -> Result<BuiltRule> {
        Ok(match self {
            RuleSpec::PluralityTable1 => {
                if *params != table1_params() {
                    return Err(Error::Mismatch(format!(
                        "plurality-table1 is fixed at {}",
                        table1_params()
                    )));
                }
                BuiltRule::Plurality(table1_plurality())
            }
            RuleSpec::Plurality => {
                BuiltRule::Plurality(make_plurality(params, TieBreakOrder::descending(params))?)
            }
            RuleSpec::Dictator(d) => BuiltRule::Essential(make_dictatorship(params, *d)?),
            RuleSpec::Essential(d, perm) => BuiltRule::Essential(make_essential_dictatorship(
                params,
                *d,
                perm.build(params.rho())?,
            )?),
            RuleSpec::Majority(tie) => BuiltRule::Independent(make_per_object_majority(
                params,
                params.check_category(*tie)?,
            )?),
        })
    }
}
