//! Profile constructions used to show that citizen sovereignty plus
//! independence forces generalized unanimity, and the profiles used by the
//! pivotal-voter step.
//!
//! Object `x_{i+1}` is object index `i` and category `p_{i+1}` is category
//! index `i`; the constructions pair the first `rho` objects with the
//! `rho` categories in order.

use serde::Serialize;

use crate::axioms::{check_citizen_sovereignty, check_validity, Caf, IndependentCaf};
use crate::error::{Error, Result};
use crate::model::{
    Budget, Category, CategoryNames, CategoryPermutation, CategoryVector, Individual, Params,
    Profile,
};
use crate::search::find_witness_vector;

use super::pivotal::PivotalLadder;

/// `p ↦ alpha_{x_p}(p, ..., p)`, pairing object `i` with category `i`.
pub(crate) fn pi_from_constants(caf: &IndependentCaf) -> Result<CategoryPermutation> {
    let params = caf.params_ref();
    let images: Vec<Category> = params
        .categories()
        .map(|p| caf.object(p.index()).on_constant(p))
        .collect();
    CategoryPermutation::from_categories(images.clone()).map_err(|_| {
        let names = CategoryNames::default();
        Error::NotABijection(format!("images [{}]", names.join(&images, params.rho())))
    })
}

/// First `(object, category)` with `alpha_x(p, ..., p) != pi(p)`.
pub fn constant_image_violation(
    caf: &IndependentCaf,
    pi: &CategoryPermutation,
) -> Option<(usize, Category)> {
    let params = caf.params_ref();
    (0..params.m()).find_map(|x| {
        params
            .categories()
            .find(|&p| caf.object(x).on_constant(p) != pi.apply(p))
            .map(|p| (x, p))
    })
}

/// The permutation `pi(p_i) = alpha_{x_i}(p_i, ..., p_i)`.
///
/// Requires `m > rho`, validity and citizen sovereignty. Under those
/// hypotheses `pi` is a bijection and `alpha_x(p, ..., p) = pi(p)` for every
/// object, and both facts are checked here.
pub fn compute_pi(caf: &IndependentCaf, budget: Budget) -> Result<CategoryPermutation> {
    let params = caf.params_ref();
    if !params.strict() {
        return Err(Error::PreconditionFailed(format!(
            "m > rho required, got {params}"
        )));
    }
    let validity = check_validity(caf, budget)?;
    if !validity.passed {
        return Err(Error::PreconditionFailed(
            "the tables do not form a valid CAF".into(),
        ));
    }
    let sovereignty = check_citizen_sovereignty(caf, budget)?;
    if !sovereignty.passed {
        return Err(Error::PreconditionFailed(
            "the CAF is not citizen sovereign".into(),
        ));
    }
    let pi = pi_from_constants(caf)?;
    if let Some((x, p)) = constant_image_violation(caf, &pi) {
        return Err(Error::VerificationFailed(format!(
            "alpha_x(p, ..., p) != pi(p) at object {x}, category {}",
            p.index()
        )));
    }
    Ok(pi)
}

/// Which construction [`build_lemma_profile`] should produce. Indices are
/// zero-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaStage {
    /// First `rho` objects unanimous on their own category, the rest on
    /// `k_{x,r}`.
    Step1 { r: Category },
    /// As `Step1`, except object `i < rho` gets `k_{x_i,r}` and object
    /// `j >= rho` is unanimous on category `i`.
    Step2 { r: Category, i: usize, j: usize },
    /// Objects `i != j < rho`: object `i` gets `k_{x_i,r}`, object `j` is
    /// unanimous on category `i`, object `rho` is unanimous on category `j`.
    Step3 { r: Category, i: usize, j: usize },
    /// Complementary vectors `r`, `r'` (entrywise `{r_k, r'_k} = {p, q}`)
    /// placed at objects `x` and `y`.
    Claim1 {
        r: CategoryVector,
        r_prime: CategoryVector,
        x: usize,
        y: usize,
    },
    /// Fixed labels `p = p1`, `q = p2`: object 0 gets `t` with `t(d) = p1`,
    /// object 1 gets `l^{d-1}`, object 2 gets `r^d`, object `k >= 3` is
    /// unanimous on category `min(k, rho) - 1`.
    Claim2 { t: CategoryVector, d: Individual },
}

fn check_index(index: usize, limit: usize) -> Result<()> {
    if index < limit {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, limit })
    }
}

fn check_vector(params: &Params, v: &CategoryVector) -> Result<()> {
    CategoryVector::new(params, v.entries().to_vec()).map(|_| ())
}

/// Builds the profile for `stage`, taking every `k_{x,r}` from
/// [`find_witness_vector`]. The result satisfies per-individual
/// surjectivity or the call fails.
pub fn build_lemma_profile(caf: &IndependentCaf, stage: &LemmaStage) -> Result<Profile> {
    let params = *caf.params_ref();
    let (m, rho) = (params.m(), params.rho());
    if !params.strict() {
        return Err(Error::PreconditionFailed(format!(
            "the constructions address object x_(rho+1) and need m > rho, got {params}"
        )));
    }
    let constant = |p: usize| CategoryVector::constant(&params, Category::from_index(p));
    let k = |x: usize, r: Category| find_witness_vector(caf, x, r);

    let columns: Vec<CategoryVector> = match stage {
        LemmaStage::Step1 { r } => {
            params.check_category(r.index())?;
            (0..m)
                .map(|x| if x < rho { Ok(constant(x)) } else { k(x, *r) })
                .collect::<Result<_>>()?
        }
        LemmaStage::Step2 { r, i, j } => {
            params.check_category(r.index())?;
            check_index(*i, rho)?;
            if *j < rho || *j >= m {
                return Err(Error::PreconditionFailed(format!(
                    "step 2 needs rho <= j < m, got j = {j}"
                )));
            }
            (0..m)
                .map(|x| match x {
                    x if x == *i => k(x, *r),
                    x if x == *j => Ok(constant(*i)),
                    x if x < rho => Ok(constant(x)),
                    x => k(x, *r),
                })
                .collect::<Result<_>>()?
        }
        LemmaStage::Step3 { r, i, j } => {
            params.check_category(r.index())?;
            check_index(*i, rho)?;
            check_index(*j, rho)?;
            if i == j {
                return Err(Error::PreconditionFailed("step 3 needs i != j".into()));
            }
            (0..m)
                .map(|x| match x {
                    x if x == *i => k(x, *r),
                    x if x == *j => Ok(constant(*i)),
                    x if x < rho => Ok(constant(x)),
                    x if x == rho => Ok(constant(*j)),
                    x => k(x, *r),
                })
                .collect::<Result<_>>()?
        }
        LemmaStage::Claim1 { r, r_prime, x, y } => {
            params.check_object(*x)?;
            params.check_object(*y)?;
            check_vector(&params, r)?;
            check_vector(&params, r_prime)?;
            if x == y {
                return Err(Error::PreconditionFailed("claim 1 needs x != y".into()));
            }
            let (p, q) = (r.get(0), r_prime.get(0));
            let complementary = p != q
                && r.entries()
                    .iter()
                    .zip(r_prime.entries())
                    .all(|(&a, &b)| (a, b) == (p, q) || (a, b) == (q, p));
            if !complementary {
                return Err(Error::PreconditionFailed(
                    "claim 1 needs r, r' complementary within two distinct categories".into(),
                ));
            }
            let rest: Vec<usize> = (0..rho)
                .filter(|&c| c != p.index() && c != q.index())
                .collect();
            let mut next = 0;
            (0..m)
                .map(|z| {
                    if z == *x {
                        r.clone()
                    } else if z == *y || rest.is_empty() {
                        // two categories: every other object copies r'
                        r_prime.clone()
                    } else {
                        let c = rest[next.min(rest.len() - 1)];
                        next += 1;
                        constant(c)
                    }
                })
                .collect()
        }
        LemmaStage::Claim2 { t, d } => {
            check_vector(&params, t)?;
            params.check_individual(*d)?;
            if t.get(d.index()).index() != 0 {
                return Err(Error::PreconditionFailed("claim 2 needs t(d) = p1".into()));
            }
            let ladder =
                PivotalLadder::new(&params, Category::from_index(0), Category::from_index(1));
            // d is one-based in the construction: l^{d-1} and r^d
            (0..m)
                .map(|z| match z {
                    0 => t.clone(),
                    1 => ladder.l(d.index()).clone(),
                    2 => ladder.r(d.number()).clone(),
                    z => constant(z.min(rho) - 1),
                })
                .collect()
        }
    };
    Profile::from_columns(&params, &columns)
}

/// A counterexample to the complementary-pair statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplementaryViolation {
    pub x: usize,
    pub y: usize,
    pub p: Category,
    pub q: Category,
    pub r: CategoryVector,
    pub r_prime: CategoryVector,
    pub outputs: [Category; 2],
}

/// Checks `{alpha_x(r), alpha_y(r')} = {pi(p), pi(q)}` for all objects
/// `x != y`, all categories `p, q` and all `r, r'` with `{r_k, r'_k} = {p, q}`.
pub fn check_complementary_pairs(
    caf: &IndependentCaf,
    pi: &CategoryPermutation,
) -> Option<ComplementaryViolation> {
    let params = caf.params_ref();
    let n = params.n();
    for x in 0..params.m() {
        for y in (0..params.m()).filter(|&y| y != x) {
            for p in params.categories() {
                for q in params.categories() {
                    let mut expected = [pi.apply(p), pi.apply(q)];
                    expected.sort();
                    for mask in 0..(1usize << n) {
                        let pick = |bit: bool| if bit { q } else { p };
                        let r = CategoryVector::from_entries_unchecked(
                            (0..n).map(|k| pick(mask >> k & 1 == 1)).collect(),
                        );
                        let r_prime = CategoryVector::from_entries_unchecked(
                            (0..n).map(|k| pick(mask >> k & 1 == 0)).collect(),
                        );
                        let outputs = [caf.object(x).eval(&r), caf.object(y).eval(&r_prime)];
                        let mut got = outputs;
                        got.sort();
                        let ok = if p == q {
                            got == [pi.apply(p); 2]
                        } else {
                            got == expected
                        };
                        if !ok {
                            return Some(ComplementaryViolation {
                                x,
                                y,
                                p,
                                q,
                                r,
                                r_prime,
                                outputs,
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

/// Replays the generalized-unanimity argument on `caf`: every step profile
/// must aggregate surjectively and put the forced object in the forced
/// category. Returns `pi` on success.
pub fn replay_generalized_unanimity(
    caf: &IndependentCaf,
    budget: Budget,
) -> Result<CategoryPermutation> {
    let params = *caf.params_ref();
    let (m, rho) = (params.m(), params.rho());
    let pi = compute_pi(caf, budget)?;
    let fail = |what: String| Err(Error::VerificationFailed(what));
    let surjective = |agg: &[Category]| {
        agg.iter()
            .fold(0u64, |acc, c| acc | 1 << c.index())
            .count_ones() as usize
            == rho
    };

    for r in params.categories() {
        let profile = build_lemma_profile(caf, &LemmaStage::Step1 { r })?;
        let agg = caf.evaluate(&profile);
        if !surjective(&agg) || agg[rho..].iter().any(|&c| c != r) {
            return fail(format!("step 1 profile for r = {} misbehaves", r.index()));
        }
    }
    for i in 0..rho {
        let target = pi.apply(Category::from_index(i));
        for r in params.categories().filter(|&r| r != target) {
            for j in rho..m {
                let profile = build_lemma_profile(caf, &LemmaStage::Step2 { r, i, j })?;
                let agg = caf.evaluate(&profile);
                if !surjective(&agg) || agg[j] != target {
                    return fail(format!(
                        "step 2 profile (r={}, i={i}, j={j}) misbehaves",
                        r.index()
                    ));
                }
            }
            for j in (0..rho).filter(|&j| j != i) {
                let profile = build_lemma_profile(caf, &LemmaStage::Step3 { r, i, j })?;
                let agg = caf.evaluate(&profile);
                if !surjective(&agg) || agg[j] != target {
                    return fail(format!(
                        "step 3 profile (r={}, i={i}, j={j}) misbehaves",
                        r.index()
                    ));
                }
            }
        }
    }
    Ok(pi)
}
