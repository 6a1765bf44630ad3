//! Pivotal-voter extraction of the essential dictator.
//!
//! For every `(x, p)` the CAF is relabeled so that `x` becomes the first
//! object and `p` the first category. The ladder `r^0, ..., r^n` (first `i`
//! entries `p2`, the rest `p1`) is walked at a third object until the output
//! flips to `pi(p2)`; the flip position is the decisive individual for
//! `(x, p)`. All decisive individuals must agree, and the final identity
//! `alpha_x(v) = pi(v_d)` is then confirmed on every vector.

use serde::Serialize;

use crate::axioms::{
    check_citizen_sovereignty, check_essential_dictatorship, check_validity, Caf, IndependentCaf,
};
use crate::error::{Error, Result};
use crate::model::{
    Budget, Category, CategoryPermutation, CategoryVector, Individual, Params, Profile,
};

use super::lemma::{
    build_lemma_profile, compute_pi, constant_image_violation, pi_from_constants, LemmaStage,
};

/// The vectors `r^i` and `l^i` for `i = 0..=n` over two categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotalLadder {
    r: Vec<CategoryVector>,
    l: Vec<CategoryVector>,
}

impl PivotalLadder {
    /// `r^i`: first `i` entries `high`, the rest `low`; `l^i` the reverse.
    pub fn new(params: &Params, low: Category, high: Category) -> Self {
        let n = params.n();
        let rung = |i: usize, front: Category, back: Category| {
            CategoryVector::from_entries_unchecked(
                (0..n).map(|k| if k < i { front } else { back }).collect(),
            )
        };
        PivotalLadder {
            r: (0..=n).map(|i| rung(i, high, low)).collect(),
            l: (0..=n).map(|i| rung(i, low, high)).collect(),
        }
    }

    pub fn r(&self, i: usize) -> &CategoryVector {
        &self.r[i]
    }

    pub fn l(&self, i: usize) -> &CategoryVector {
        &self.l[i]
    }

    /// Number of rungs, `n + 1`.
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Pivotal,
    Exhaustive,
}

/// One recorded step, in the CAF's own labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum TraceStep {
    /// The first rung at which the ladder object's output flips.
    Ladder {
        object: usize,
        category: Category,
        ladder_object: usize,
        rung: usize,
        input: CategoryVector,
        output: Category,
    },
    /// The profile showing the decisive individual controls `(object, category)`.
    Profile {
        object: usize,
        category: Category,
        individual: Individual,
        profile: Profile,
        aggregate: Vec<Category>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DictatorReport {
    pub individual: Individual,
    pub permutation: CategoryPermutation,
    pub method: Method,
    /// `alpha_x(v) = pi(v_d)` held on every object and vector.
    pub verified: bool,
    /// `m > rho >= 2`. Outside that range the ladder still runs but the
    /// decisive-profile step is skipped and only the final check counts.
    pub within_hypotheses: bool,
    pub trace: Vec<TraceStep>,
}

fn swap_objects(m: usize, x: usize) -> Vec<usize> {
    let mut objects: Vec<usize> = (0..m).collect();
    objects.swap(0, x);
    objects
}

/// Extracts `(d, pi)` by the pivotal-voter argument and verifies it.
///
/// Fails with `VerificationFailed` when the CAF is not valid, not citizen
/// sovereign, or when any step of the argument does not go through.
pub fn extract_dictator_pivotal(caf: &IndependentCaf, budget: Budget) -> Result<DictatorReport> {
    let params = *caf.params_ref();
    let (n, m, rho) = (params.n(), params.m(), params.rho());
    let refuted = |what: &str| Error::VerificationFailed(format!("precondition refuted: {what}"));

    if !check_validity(caf, budget)?.passed {
        return Err(refuted("the tables do not form a valid CAF"));
    }
    if !check_citizen_sovereignty(caf, budget)?.passed {
        return Err(refuted("the CAF is not citizen sovereign"));
    }
    let within_hypotheses = params.strict();
    let pi = if within_hypotheses {
        compute_pi(caf, budget)?
    } else {
        let pi = pi_from_constants(caf)?;
        if let Some((x, p)) = constant_image_violation(caf, &pi) {
            return Err(Error::VerificationFailed(format!(
                "alpha_x(p, ..., p) != pi(p) at object {x}, category {}",
                p.index()
            )));
        }
        pi
    };

    let p1 = Category::from_index(0);
    let p2 = Category::from_index(1);
    let ladder = PivotalLadder::new(&params, p1, p2);
    let ladder_object = if m >= 3 { 2 } else { m - 1 };
    let mut trace = Vec::new();
    let mut decisive: Option<(usize, Category, Individual)> = None;

    for x in 0..m {
        let objects = swap_objects(m, x);
        for p in params.categories() {
            let sigma = CategoryPermutation::transposition(rho, p, p1)?;
            let beta = caf.relabel_objects(&objects).relabel_categories(&sigma);
            let beta_pi = sigma.compose(&pi).compose(&sigma);
            let flip = beta_pi.apply(p2);

            let table = beta.object(ladder_object);
            let rung = (1..=n)
                .find(|&i| table.eval(ladder.r(i)) == flip)
                .ok_or_else(|| {
                    Error::VerificationFailed(format!(
                        "ladder at object {} never reaches pi(p2) for ({x}, {})",
                        objects[ladder_object],
                        p.index()
                    ))
                })?;
            let d = Individual::from_index(rung - 1);
            trace.push(TraceStep::Ladder {
                object: x,
                category: p,
                ladder_object: objects[ladder_object],
                rung,
                input: ladder.r(rung).map(&sigma),
                output: sigma.apply(flip),
            });

            if within_hypotheses {
                let below = beta.object(1).eval(ladder.l(d.index()));
                if below != flip {
                    return Err(Error::VerificationFailed(format!(
                        "alpha(l^(d-1)) != pi(p2) for ({x}, {})",
                        p.index()
                    )));
                }
                let t = ladder.r(d.index()).clone();
                let profile = build_lemma_profile(&beta, &LemmaStage::Claim2 { t, d })?;
                let aggregate = beta.evaluate(&profile);
                if aggregate[0] != beta_pi.apply(p1) {
                    return Err(Error::VerificationFailed(format!(
                        "individual {d} is not decisive for ({x}, {})",
                        p.index()
                    )));
                }
                let original = profile.relabel(&sigma, &objects);
                let aggregate = caf.evaluate(&original);
                trace.push(TraceStep::Profile {
                    object: x,
                    category: p,
                    individual: d,
                    profile: original,
                    aggregate,
                });
            }

            match decisive {
                None => decisive = Some((x, p, d)),
                Some((x0, p0, d0)) if d0 != d => {
                    return Err(Error::VerificationFailed(format!(
                        "decisive individuals differ: {d0} for ({x0}, {}), {d} for ({x}, {})",
                        p0.index(),
                        p.index()
                    )))
                }
                Some(_) => {}
            }
        }
    }

    let (_, _, d) = decisive.expect("at least one object and category");
    for x in 0..m {
        let table = caf.object(x);
        for code in 0..params.table_len() {
            let v = CategoryVector::decode_unchecked(n, rho, code);
            if table.eval_code(code) != pi.apply(v.get(d.index())) {
                return Err(Error::VerificationFailed(format!(
                    "alpha_{x}(code {code}) != pi(v_{d})"
                )));
            }
        }
    }

    Ok(DictatorReport {
        individual: d,
        permutation: pi,
        method: Method::Pivotal,
        verified: true,
        within_hypotheses,
        trace,
    })
}

/// `(d, pi)` by scanning the whole profile space, with no trace.
pub fn extract_dictator_exhaustive(caf: &IndependentCaf, budget: Budget) -> Result<DictatorReport> {
    match check_essential_dictatorship(caf, budget)? {
        Some(found) => Ok(DictatorReport {
            individual: found.individual,
            permutation: found.permutation,
            method: Method::Exhaustive,
            verified: true,
            within_hypotheses: caf.params_ref().strict(),
            trace: Vec::new(),
        }),
        None => Err(Error::VerificationFailed(
            "no individual is an essential dictator".into(),
        )),
    }
}
