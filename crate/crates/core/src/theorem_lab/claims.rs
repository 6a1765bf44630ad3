//! Exhaustive verifiers for the impossibility results at fixed sizes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::axioms::{check_essential_dictatorship, Axiom, EssentialDictator, IndependentCaf};
use crate::error::{Error, Result};
use crate::model::{Budget, CategoryPermutation, CategoryVector, Individual, Params};
use crate::search::{enumerate_independent_cafs, SearchReport, SearchSpec, TableConstraint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Claim {
    /// Citizen sovereign and independent implies essential dictatorship; `m > rho >= 2`.
    Thm1,
    /// Unanimous and independent implies dictatorship; `m > rho >= 2`.
    Coro1,
    /// Unanimous and independent implies dictatorship; `m >= rho >= 2`, `m >= 3`.
    Coro2,
    /// The unanimous independent CAFs at `m = rho = 2` are the pairs with
    /// `alpha_y(r) = not alpha_x(not r)`, and there are `2^(2^n - 2)` of them.
    Prop1,
    /// Unanimous and independent implies dictatorship; `m >= rho >= 3`.
    Thm2,
}

impl Claim {
    pub const ALL: [Claim; 5] = [
        Claim::Thm1,
        Claim::Coro1,
        Claim::Coro2,
        Claim::Prop1,
        Claim::Thm2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::Thm1 => "thm1",
            Claim::Coro1 => "coro1",
            Claim::Coro2 => "coro2",
            Claim::Prop1 => "prop1",
            Claim::Thm2 => "thm2",
        }
    }

    pub fn hypothesis(self) -> &'static str {
        match self {
            Claim::Thm1 | Claim::Coro1 => "m > rho >= 2",
            Claim::Coro2 => "m >= rho >= 2 and m >= 3",
            Claim::Prop1 => "m = rho = 2",
            Claim::Thm2 => "m >= rho >= 3",
        }
    }

    pub fn check_hypothesis(self, params: &Params) -> Result<()> {
        let (m, rho) = (params.m(), params.rho());
        let ok = match self {
            Claim::Thm1 | Claim::Coro1 => m > rho && rho >= 2,
            Claim::Coro2 => m >= rho && rho >= 2 && m >= 3,
            Claim::Prop1 => m == 2 && rho == 2,
            Claim::Thm2 => m >= rho && rho >= 3,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::HypothesisViolated(format!(
                "{} needs {}, got {params}",
                self.name(),
                self.hypothesis()
            )))
        }
    }

    fn search(self, params: Params) -> SearchSpec {
        match self {
            Claim::Thm1 => SearchSpec::new(params).require(Axiom::CitizenSovereignty),
            _ => SearchSpec::new(params)
                .require(Axiom::Unanimity)
                .constraint(TableConstraint::UnanimousOnConstants),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.name() == s.to_ascii_lowercase())
            .ok_or_else(|| {
                Error::InvalidParams(format!(
                    "unknown claim {s:?}, expected one of thm1, coro1, coro2, prop1, thm2"
                ))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClaimOptions {
    pub budget: u64,
    pub prune: bool,
    /// 0 means one per core.
    pub workers: usize,
}

impl Default for ClaimOptions {
    fn default() -> Self {
        ClaimOptions {
            budget: Budget::default().0,
            prune: true,
            workers: 0,
        }
    }
}

/// A `(d, pi)` pair realized in the population.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CensusPair {
    pub individual: Individual,
    pub permutation: CategoryPermutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremVerdict {
    pub claim: Claim,
    pub hypothesis: &'static str,
    pub params: Params,
    pub holds: bool,
    /// CAFs the search emitted: valid plus the claim's required axiom.
    pub population: u64,
    pub essential_dictatorships: u64,
    pub dictatorships: u64,
    pub not_essential_dictatorships: u64,
    /// `2^(2^n - 2)` for `prop1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_population: Option<u64>,
    /// Whether the population equals the complement characterization (`prop1`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characterization_matches: Option<bool>,
    pub census: Vec<CensusPair>,
    pub counterexample: Option<IndependentCaf>,
    pub search: SearchReport,
    pub elapsed_ms: u64,
}

/// The unanimous independent CAFs at `m = rho = 2` predicted by the
/// complement characterization, in table order.
pub fn complement_characterization(params: &Params) -> Result<BTreeSet<IndependentCaf>> {
    if params.m() != 2 || params.rho() != 2 {
        return Err(Error::HypothesisViolated(format!(
            "the complement characterization needs m = rho = 2, got {params}"
        )));
    }
    let n = params.n();
    let k = params.table_len();
    let full = k - 1;
    let free: Vec<usize> = (1..full).collect();
    let mut out = BTreeSet::new();
    for bits in 0u64..(1u64 << free.len()) {
        let mut x = vec![0u8; k];
        x[full] = 1;
        for (b, &code) in free.iter().enumerate() {
            x[code] = (bits >> b & 1) as u8;
        }
        // complementing every entry of r maps code c to (2^n - 1) - c
        let y: Vec<u8> = (0..k).map(|code| 1 - x[full - code]).collect();
        debug_assert_eq!(k, 1 << n);
        out.insert(IndependentCaf::from_raw(params, &[x, y]));
    }
    Ok(out)
}

/// Runs the claim's search and checks its conclusion on every emitted CAF.
pub fn verify_claim(
    claim: Claim,
    params: &Params,
    options: ClaimOptions,
) -> Result<TheoremVerdict> {
    verify_claim_with_population(claim, params, options).map(|(verdict, _)| verdict)
}

/// As [`verify_claim`], also returning the searched population.
pub fn verify_claim_with_population(
    claim: Claim,
    params: &Params,
    options: ClaimOptions,
) -> Result<(TheoremVerdict, Vec<IndependentCaf>)> {
    let started = Instant::now();
    claim.check_hypothesis(params)?;
    let budget = Budget(options.budget);
    let spec = claim
        .search(*params)
        .budget(options.budget)
        .prune(options.prune)
        .workers(options.workers);
    let outcome = enumerate_independent_cafs(&spec)?;

    let mut found: Vec<Option<EssentialDictator>> = Vec::with_capacity(outcome.cafs.len());
    for caf in &outcome.cafs {
        found.push(check_essential_dictatorship(caf, budget)?);
    }
    let essential = found.iter().flatten().count() as u64;
    let dictatorships = found
        .iter()
        .flatten()
        .filter(|e| e.is_dictatorship())
        .count() as u64;
    let census: BTreeSet<CensusPair> = found
        .iter()
        .flatten()
        .map(|e| CensusPair {
            individual: e.individual,
            permutation: e.permutation.clone(),
        })
        .collect();

    let conclusion = |e: &Option<EssentialDictator>| match claim {
        Claim::Thm1 => e.is_some(),
        _ => e.as_ref().is_some_and(EssentialDictator::is_dictatorship),
    };

    let (holds, counterexample, expected, matches) = if claim == Claim::Prop1 {
        let predicted = complement_characterization(params)?;
        let emitted: BTreeSet<IndependentCaf> = outcome.cafs.iter().cloned().collect();
        let expected = 1u64 << (params.table_len() - 2);
        let stray = emitted.symmetric_difference(&predicted).next().cloned();
        let matches = stray.is_none();
        (
            matches && emitted.len() as u64 == expected,
            stray,
            Some(expected),
            Some(matches),
        )
    } else {
        let bad = outcome
            .cafs
            .iter()
            .zip(&found)
            .find(|(_, e)| !conclusion(e))
            .map(|(caf, _)| caf.clone());
        (bad.is_none(), bad, None, None)
    };

    let population = outcome.cafs.len() as u64;
    let verdict = TheoremVerdict {
        claim,
        hypothesis: claim.hypothesis(),
        params: *params,
        holds,
        population,
        essential_dictatorships: essential,
        dictatorships,
        not_essential_dictatorships: population - essential,
        expected_population: expected,
        characterization_matches: matches,
        census: census.into_iter().collect(),
        counterexample,
        search: outcome.report,
        elapsed_ms: started.elapsed().as_millis() as u64,
    };
    Ok((verdict, outcome.cafs))
}

/// Checks `alpha_y(r) = not alpha_x(not r)` entry by entry on a two-object,
/// two-category CAF.
pub fn satisfies_complement_rule(caf: &IndependentCaf) -> bool {
    let params = caf.params_ref();
    if params.m() != 2 || params.rho() != 2 {
        return false;
    }
    let flip = CategoryPermutation::new(&[1, 0]).expect("two categories");
    (0..params.table_len()).all(|code| {
        let r = CategoryVector::decode_unchecked(params.n(), 2, code);
        caf.object(1).eval(&r) == flip.apply(caf.object(0).eval(&r.map(&flip)))
    })
}
