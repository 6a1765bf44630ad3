//! Domain types of the classification-aggregation model.
//!
//! Categories are zero-based indices `0..rho`. Individuals are zero-based
//! internally and rendered one-based (`individual 1` is the first voter).
//! Objects are zero-based positions in an assignment.
//!
//! A [`CategoryVector`] has a canonical integer code: mixed radix base `rho`
//! with individual 1 as the most significant digit. Elementary tables are
//! indexed by that code, so the lexicographic order of vectors and the
//! numeric order of codes coincide.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default bound on `rho^n`, the length of an elementary table.
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 20;

/// Largest supported number of categories (aggregate coverage is tracked in a `u32` mask).
pub const MAX_RHO: usize = 32;

/// The size triple `(n, m, rho)`: individuals, objects and categories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct Params {
    n: usize,
    m: usize,
    rho: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    n: usize,
    m: usize,
    rho: usize,
}

impl TryFrom<RawParams> for Params {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Params::new(raw.n, raw.m, raw.rho)
    }
}

impl Params {
    pub fn new(n: usize, m: usize, rho: usize) -> Result<Self> {
        Self::with_table_limit(n, m, rho, DEFAULT_TABLE_LIMIT)
    }

    /// Like [`Params::new`] but with a caller-chosen bound on `rho^n`.
    pub fn with_table_limit(n: usize, m: usize, rho: usize, table_limit: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("n = {n}, need n >= 2")));
        }
        if rho < 2 {
            return Err(Error::InvalidParams(format!("rho = {rho}, need rho >= 2")));
        }
        if m < rho {
            return Err(Error::InvalidParams(format!(
                "m = {m} < rho = {rho}, need m >= rho"
            )));
        }
        if rho > MAX_RHO {
            return Err(Error::InvalidParams(format!(
                "rho = {rho} exceeds the supported maximum {MAX_RHO}"
            )));
        }
        let entries = (rho as u64).checked_pow(n as u32);
        match entries {
            Some(e) if e <= table_limit => Ok(Params { n, m, rho }),
            _ => Err(Error::InvalidParams(format!(
                "rho^n = {rho}^{n} table entries exceed the limit {table_limit}"
            ))),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    /// `m > rho`, the size hypothesis of the essential-dictatorship theorem.
    pub fn strict(&self) -> bool {
        self.m > self.rho
    }

    /// Number of category vectors, `rho^n`.
    pub fn table_len(&self) -> usize {
        self.rho.pow(self.n as u32)
    }

    pub(crate) fn check_category(&self, index: usize) -> Result<Category> {
        Category::new(index, self.rho)
    }

    pub(crate) fn check_object(&self, object: usize) -> Result<()> {
        if object < self.m {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: object,
                limit: self.m,
            })
        }
    }

    pub(crate) fn check_individual(&self, individual: Individual) -> Result<()> {
        if individual.index() < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: individual.number(),
                limit: self.n,
            })
        }
    }

    pub(crate) fn categories(&self) -> impl Iterator<Item = Category> {
        (0..self.rho).map(Category::from_index)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, m={}, rho={})", self.n, self.m, self.rho)
    }
}

/// Upper bound on the number of profile-level evaluations a check may perform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(1_000_000_000)
    }
}

impl Budget {
    pub fn check(&self, estimate: &BigUint) -> Result<()> {
        if *estimate <= BigUint::from(self.0) {
            Ok(())
        } else {
            Err(Error::BudgetExceeded {
                estimate: estimate.to_string(),
                budget: self.0,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Category(u8);

impl Category {
    pub fn new(index: usize, rho: usize) -> Result<Self> {
        if index < rho {
            Ok(Category(index as u8))
        } else {
            Err(Error::BadCategory { index, rho })
        }
    }

    pub(crate) const fn from_index(index: usize) -> Self {
        Category(index as u8)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

/// An individual. Stored zero-based, displayed and serialized one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Individual(usize);

impl Individual {
    pub const fn from_index(index: usize) -> Self {
        Individual(index)
    }

    /// From a one-based number, as used on the command line.
    pub fn from_number(number: usize) -> Result<Self> {
        if number == 0 {
            Err(Error::InvalidParams(
                "individuals are numbered from 1".into(),
            ))
        } else {
            Ok(Individual(number - 1))
        }
    }

    pub const fn index(self) -> usize {
        self.0
    }

    pub const fn number(self) -> usize {
        self.0 + 1
    }
}

impl Serialize for Individual {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.number() as u64)
    }
}

impl fmt::Display for Individual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Presentation names for categories: `p1..prho`, or `p`/`q` when `letters`
/// is set and there are exactly two categories.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CategoryNames {
    pub letters: bool,
}

impl CategoryNames {
    pub fn name(&self, category: Category, rho: usize) -> String {
        if self.letters && rho == 2 {
            ["p", "q"][category.index()].to_string()
        } else {
            format!("p{}", category.index() + 1)
        }
    }

    pub fn join(&self, categories: &[Category], rho: usize) -> String {
        categories
            .iter()
            .map(|&c| self.name(c, rho))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn missing_category(rho: usize, assignment: &[Category]) -> Option<usize> {
    let mut seen = 0u64;
    for c in assignment {
        seen |= 1 << c.index();
    }
    (0..rho).find(|&p| seen & (1 << p) == 0)
}

/// A surjective assignment of objects to categories.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Classification {
    assignment: Vec<Category>,
}

impl Classification {
    /// Validates length, range and surjectivity of `values` under `params`.
    pub fn new(params: &Params, values: &[usize]) -> Result<Self> {
        if values.len() != params.m {
            return Err(Error::BadLength {
                expected: params.m,
                got: values.len(),
            });
        }
        let assignment = values
            .iter()
            .map(|&v| params.check_category(v))
            .collect::<Result<Vec<_>>>()?;
        Self::from_categories(params.rho, assignment)
    }

    pub fn from_categories(rho: usize, assignment: Vec<Category>) -> Result<Self> {
        if let Some(bad) = assignment.iter().find(|c| c.index() >= rho) {
            return Err(Error::BadCategory {
                index: bad.index(),
                rho,
            });
        }
        match missing_category(rho, &assignment) {
            Some(missing) => Err(Error::NotSurjective { missing }),
            None => Ok(Classification { assignment }),
        }
    }

    pub(crate) fn from_surjective(rho: usize, assignment: Vec<Category>) -> Self {
        debug_assert!(
            missing_category(rho, &assignment).is_none(),
            "classification must be surjective"
        );
        Classification { assignment }
    }

    pub fn get(&self, object: usize) -> Category {
        self.assignment[object]
    }

    pub fn categories(&self) -> &[Category] {
        &self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Number of categories; every category is used, so this is `max + 1`.
    pub fn rho(&self) -> usize {
        self.assignment
            .iter()
            .map(|c| c.index() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Lexicographically smallest classification that sends `object` to `category`.
    pub fn smallest_with(params: &Params, object: usize, category: Category) -> Self {
        let (m, rho) = (params.m, params.rho);
        let mut assignment = vec![Category(0); m];
        assignment[object] = category;
        let mut used = 1u64 << category.index();
        let mut free = m - 1;
        for (j, slot) in assignment.iter_mut().enumerate() {
            if j == object {
                continue;
            }
            free -= 1;
            let value = (0..rho)
                .find(|&v| {
                    let trial = used | (1 << v);
                    rho - trial.count_ones() as usize <= free
                })
                .expect("a feasible completion exists whenever m >= rho");
            *slot = Category::from_index(value);
            used |= 1 << value;
        }
        Classification::from_surjective(rho, assignment)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = CategoryNames::default();
        f.write_str(&names.join(&self.assignment, self.rho()))
    }
}

/// One classification per individual.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Profile {
    members: Vec<Classification>,
}

impl Profile {
    pub fn new(params: &Params, members: Vec<Classification>) -> Result<Self> {
        if members.len() != params.n {
            return Err(Error::BadLength {
                expected: params.n,
                got: members.len(),
            });
        }
        for member in &members {
            if member.len() != params.m {
                return Err(Error::BadLength {
                    expected: params.m,
                    got: member.len(),
                });
            }
            if member.rho() != params.rho {
                return Err(Error::Mismatch(format!(
                    "member uses {} categories, params say {}",
                    member.rho(),
                    params.rho
                )));
            }
        }
        Ok(Profile { members })
    }

    /// The profile in which every individual submits `c`.
    pub fn unanimous(params: &Params, c: &Classification) -> Self {
        Profile {
            members: vec![c.clone(); params.n],
        }
    }

    /// Rebuilds a profile from its `m` columns; fails if some individual's
    /// row is not surjective.
    pub fn from_columns(params: &Params, columns: &[CategoryVector]) -> Result<Self> {
        if columns.len() != params.m {
            return Err(Error::BadLength {
                expected: params.m,
                got: columns.len(),
            });
        }
        let mut members = Vec::with_capacity(params.n);
        for i in 0..params.n {
            let row = columns
                .iter()
                .map(|col| {
                    if col.len() == params.n {
                        Ok(col.get(i))
                    } else {
                        Err(Error::BadLength {
                            expected: params.n,
                            got: col.len(),
                        })
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            members.push(Classification::from_categories(params.rho, row)?);
        }
        Ok(Profile { members })
    }

    pub fn members(&self) -> &[Classification] {
        &self.members
    }

    pub fn member(&self, individual: Individual) -> &Classification {
        &self.members[individual.index()]
    }

    pub fn n(&self) -> usize {
        self.members.len()
    }

    pub fn m(&self) -> usize {
        self.members.first().map_or(0, Classification::len)
    }

    /// The vector of categories given to `object` by each individual.
    pub fn column(&self, object: usize) -> Result<CategoryVector> {
        if object >= self.m() {
            return Err(Error::IndexOutOfRange {
                index: object,
                limit: self.m(),
            });
        }
        Ok(CategoryVector {
            entries: self.members.iter().map(|c| c.get(object)).collect(),
        })
    }

    pub(crate) fn column_code(&self, object: usize, rho: usize) -> usize {
        self.members
            .iter()
            .fold(0, |acc, c| acc * rho + c.get(object).index())
    }

    /// Applies `sigma` to every category and reads object `x` of the result
    /// from object `objects[x]` of the original.
    pub fn relabel(&self, sigma: &CategoryPermutation, objects: &[usize]) -> Profile {
        let rho = sigma.rho();
        Profile {
            members: self
                .members
                .iter()
                .map(|c| {
                    let assignment = objects.iter().map(|&x| sigma.apply(c.get(x))).collect();
                    Classification::from_surjective(rho, assignment)
                })
                .collect(),
        }
    }
}

/// Profile shorthand for the category vectors of one object.
pub fn profile_column(profile: &Profile, object: usize) -> Result<CategoryVector> {
    profile.column(object)
}

/// The categories assigned to one object by each of the `n` individuals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CategoryVector {
    entries: Vec<Category>,
}

impl CategoryVector {
    pub fn new(params: &Params, entries: Vec<Category>) -> Result<Self> {
        if entries.len() != params.n {
            return Err(Error::BadLength {
                expected: params.n,
                got: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|c| c.index() >= params.rho) {
            return Err(Error::BadCategory {
                index: bad.index(),
                rho: params.rho,
            });
        }
        Ok(CategoryVector { entries })
    }

    pub fn from_indices(params: &Params, values: &[usize]) -> Result<Self> {
        let entries = values
            .iter()
            .map(|&v| params.check_category(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, entries)
    }

    pub fn constant(params: &Params, category: Category) -> Self {
        CategoryVector {
            entries: vec![category; params.n],
        }
    }

    pub fn decode(params: &Params, code: usize) -> Result<Self> {
        if code >= params.table_len() {
            return Err(Error::IndexOutOfRange {
                index: code,
                limit: params.table_len(),
            });
        }
        Ok(Self::decode_unchecked(params.n, params.rho, code))
    }

    pub(crate) fn decode_unchecked(n: usize, rho: usize, mut code: usize) -> Self {
        let mut entries = vec![Category(0); n];
        for slot in entries.iter_mut().rev() {
            *slot = Category::from_index(code % rho);
            code /= rho;
        }
        CategoryVector { entries }
    }

    pub(crate) fn from_entries_unchecked(entries: Vec<Category>) -> Self {
        CategoryVector { entries }
    }

    pub fn encode(&self, params: &Params) -> usize {
        self.entries
            .iter()
            .fold(0, |acc, c| acc * params.rho + c.index())
    }

    pub fn get(&self, individual: usize) -> Category {
        self.entries[individual]
    }

    pub fn entries(&self) -> &[Category] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn map(&self, sigma: &CategoryPermutation) -> CategoryVector {
        CategoryVector {
            entries: self.entries.iter().map(|&c| sigma.apply(c)).collect(),
        }
    }
}

/// A bijection on the categories.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CategoryPermutation {
    image: Vec<Category>,
}

impl CategoryPermutation {
    pub fn new(image: &[usize]) -> Result<Self> {
        let rho = image.len();
        let mut seen = vec![false; rho];
        for &v in image {
            if v >= rho {
                return Err(Error::NotAPermutation(format!(
                    "image {v} out of range for {rho} categories"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotAPermutation(format!("image {v} repeated")));
            }
        }
        Ok(CategoryPermutation {
            image: image.iter().map(|&v| Category::from_index(v)).collect(),
        })
    }

    pub fn from_categories(image: Vec<Category>) -> Result<Self> {
        Self::new(&image.iter().map(|c| c.index()).collect::<Vec<_>>())
    }

    pub fn identity(rho: usize) -> Self {
        CategoryPermutation {
            image: (0..rho).map(Category::from_index).collect(),
        }
    }

    pub fn transposition(rho: usize, a: Category, b: Category) -> Result<Self> {
        if a.index() >= rho || b.index() >= rho {
            return Err(Error::BadCategory {
                index: a.index().max(b.index()),
                rho,
            });
        }
        let mut image: Vec<Category> = (0..rho).map(Category::from_index).collect();
        image.swap(a.index(), b.index());
        Ok(CategoryPermutation { image })
    }

    /// All `rho!` permutations in lexicographic order of their image sequences.
    pub fn all(rho: usize) -> Vec<Self> {
        let mut current: Vec<usize> = (0..rho).collect();
        let mut out = Vec::new();
        loop {
            out.push(CategoryPermutation {
                image: current.iter().map(|&v| Category::from_index(v)).collect(),
            });
            // next permutation in lexicographic order
            let Some(i) = (0..rho.saturating_sub(1))
                .rev()
                .find(|&i| current[i] < current[i + 1])
            else {
                break;
            };
            let j = (i + 1..rho)
                .rev()
                .find(|&j| current[j] > current[i])
                .unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }

    pub fn apply(&self, category: Category) -> Category {
        self.image[category.index()]
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![Category(0); self.image.len()];
        for (from, to) in self.image.iter().enumerate() {
            image[to.index()] = Category::from_index(from);
        }
        CategoryPermutation { image }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &CategoryPermutation) -> Self {
        CategoryPermutation {
            image: other.image.iter().map(|&c| self.apply(c)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, c)| c.index() == i)
    }

    pub fn rho(&self) -> usize {
        self.image.len()
    }

    pub fn images(&self) -> &[Category] {
        &self.image
    }

    pub fn render(&self, names: CategoryNames) -> String {
        let rho = self.rho();
        if self.is_identity() {
            return "id".to_string();
        }
        (0..rho)
            .map(|i| {
                format!(
                    "{}->{}",
                    names.name(Category::from_index(i), rho),
                    names.name(self.image[i], rho)
                )
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// `pi ∘ c`.
pub fn apply_permutation(pi: &CategoryPermutation, c: &Classification) -> Result<Classification> {
    if pi.rho() != c.rho() {
        return Err(Error::Mismatch(format!(
            "permutation on {} categories applied to a classification onto {}",
            pi.rho(),
            c.rho()
        )));
    }
    let assignment = c.categories().iter().map(|&p| pi.apply(p)).collect();
    Ok(Classification::from_surjective(pi.rho(), assignment))
}

/// Every classification for `params`, in lexicographic order.
pub fn enumerate_classifications(params: &Params) -> Classifications {
    Classifications {
        rho: params.rho,
        current: Some(vec![0; params.m]),
    }
}

/// Iterator returned by [`enumerate_classifications`].
#[derive(Clone, Debug)]
pub struct Classifications {
    rho: usize,
    current: Option<Vec<u8>>,
}

impl Iterator for Classifications {
    type Item = Classification;

    fn next(&mut self) -> Option<Classification> {
        let rho = self.rho;
        loop {
            let digits = self.current.as_mut()?;
            let mut seen = 0u64;
            for &d in digits.iter() {
                seen |= 1 << d;
            }
            let item = (seen.count_ones() as usize == rho).then(|| {
                Classification::from_surjective(rho, digits.iter().map(|&d| Category(d)).collect())
            });
            // odometer step, last position fastest
            let mut pos = digits.len();
            loop {
                if pos == 0 {
                    self.current = None;
                    break;
                }
                pos -= 1;
                if (digits[pos] as usize) + 1 < rho {
                    digits[pos] += 1;
                    break;
                }
                digits[pos] = 0;
            }
            if item.is_some() {
                return item;
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `|C|`, the number of surjections from `m` objects onto `rho` categories,
/// by inclusion–exclusion.
pub fn count_classifications(params: &Params) -> BigUint {
    let (m, rho) = (params.m, params.rho);
    let mut plus = BigUint::from(0u32);
    let mut minus = BigUint::from(0u32);
    for k in 0..=rho {
        let term = binomial(rho, k) * BigUint::from(rho - k).pow(m as u32);
        if k % 2 == 0 {
            plus += term;
        } else {
            minus += term;
        }
    }
    plus - minus
}

/// The full profile space `C^N`, indexed in lexicographic order with
/// individual 1 as the most significant position.
#[derive(Clone, Debug)]
pub struct ProfileSpace {
    params: Params,
    classifications: Vec<Classification>,
    len: usize,
}

impl ProfileSpace {
    pub fn new(params: &Params, budget: Budget) -> Result<Self> {
        let count = count_classifications(params);
        let total = count.pow(params.n as u32);
        budget.check(&total)?;
        let len = usize::try_from(&total).map_err(|_| Error::BudgetExceeded {
            estimate: total.to_string(),
            budget: budget.0,
        })?;
        Ok(ProfileSpace {
            params: *params,
            classifications: enumerate_classifications(params).collect(),
            len,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn classifications(&self) -> &[Classification] {
        &self.classifications
    }

    /// Indices into [`ProfileSpace::classifications`] for each individual.
    pub fn member_indices(&self, mut index: usize) -> Vec<usize> {
        let base = self.classifications.len();
        let mut digits = vec![0; self.params.n];
        for slot in digits.iter_mut().rev() {
            *slot = index % base;
            index /= base;
        }
        digits
    }

    pub fn profile(&self, index: usize) -> Profile {
        Profile {
            members: self
                .member_indices(index)
                .into_iter()
                .map(|i| self.classifications[i].clone())
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Profile> + '_ {
        (0..self.len).map(move |i| self.profile(i))
    }

    /// Column codes of every profile, flattened as `codes[profile * m + object]`.
    pub fn column_codes(&self) -> Vec<u32> {
        let (n, m, rho) = (self.params.n, self.params.m, self.params.rho);
        let mut codes = vec![0u32; self.len * m];
        for p in 0..self.len {
            let members = self.member_indices(p);
            for x in 0..m {
                let mut code = 0usize;
                for &ci in members.iter().take(n) {
                    code = code * rho + self.classifications[ci].get(x).index();
                }
                codes[p * m + x] = code as u32;
            }
        }
        codes
    }
}

/// Extends a single column to a full profile: each individual gets the
/// lexicographically smallest classification that agrees with the column at
/// `object`. Always possible when `m >= rho`.
pub fn extend_column(params: &Params, object: usize, column: &CategoryVector) -> Result<Profile> {
    params.check_object(object)?;
    if column.len() != params.n {
        return Err(Error::BadLength {
            expected: params.n,
            got: column.len(),
        });
    }
    let members = column
        .entries()
        .iter()
        .map(|&c| Classification::smallest_with(params, object, c))
        .collect();
    Ok(Profile { members })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, m: usize, rho: usize) -> Params {
        Params::new(n, m, rho).unwrap()
    }

    fn cat(i: usize) -> Category {
        Category::from_index(i)
    }

    #[test]
    fn params_bounds() {
        assert!(Params::new(1, 3, 2).is_err());
        assert!(Params::new(2, 3, 1).is_err());
        assert!(Params::new(2, 2, 3).is_err());
        assert!(Params::new(2, 3, 2).unwrap().strict());
        assert!(!Params::new(2, 2, 2).unwrap().strict());
        assert!(Params::new(21, 30, 2).is_err());
        assert!(Params::with_table_limit(21, 30, 2, 1 << 21).is_ok());
    }

    #[test]
    fn make_classification_cases() {
        let p = params(2, 3, 2);
        let c = Classification::new(&p, &[0, 1, 1]).unwrap();
        assert_eq!(c.categories(), &[cat(0), cat(1), cat(1)]);
        assert_eq!(
            Classification::new(&p, &[0, 0, 0]),
            Err(Error::NotSurjective { missing: 1 })
        );
        assert_eq!(
            Classification::new(&p, &[0, 1]),
            Err(Error::BadLength {
                expected: 3,
                got: 2
            })
        );
        assert_eq!(
            Classification::new(&p, &[0, 1, 2]),
            Err(Error::BadCategory { index: 2, rho: 2 })
        );
        let q = params(2, 2, 2);
        assert_eq!(
            Classification::new(&q, &[1, 0]).unwrap().categories(),
            &[cat(1), cat(0)]
        );
    }

    #[test]
    fn enumerate_two_by_two() {
        let all: Vec<_> = enumerate_classifications(&params(2, 2, 2)).collect();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].categories(), &[cat(0), cat(1)]);
        assert_eq!(all[1].categories(), &[cat(1), cat(0)]);
    }

    #[test]
    fn counts_match_closed_form() {
        assert_eq!(count_classifications(&params(2, 2, 2)), BigUint::from(2u32));
        assert_eq!(count_classifications(&params(2, 3, 2)), BigUint::from(6u32));
        assert_eq!(
            count_classifications(&params(2, 4, 3)),
            BigUint::from(36u32)
        );
    }

    #[test]
    fn column_of_unanimous_profile_is_constant() {
        let p = params(3, 3, 2);
        let c = Classification::new(&p, &[0, 1, 1]).unwrap();
        let profile = Profile::unanimous(&p, &c);
        for x in 0..3 {
            let col = profile.column(x).unwrap();
            assert!(col.entries().iter().all(|&e| e == c.get(x)));
        }
        assert!(matches!(
            profile.column(3),
            Err(Error::IndexOutOfRange { index: 3, limit: 3 })
        ));
    }

    #[test]
    fn permutation_examples() {
        let p2 = params(2, 3, 2);
        let c = Classification::new(&p2, &[0, 1, 1]).unwrap();
        let id = CategoryPermutation::identity(2);
        assert_eq!(apply_permutation(&id, &c).unwrap(), c);
        let swap = CategoryPermutation::new(&[1, 0]).unwrap();
        assert_eq!(
            apply_permutation(&swap, &c).unwrap().categories(),
            &[cat(1), cat(0), cat(0)]
        );
        let p3 = params(2, 3, 3);
        let cycle = CategoryPermutation::new(&[1, 2, 0]).unwrap();
        let c3 = Classification::new(&p3, &[0, 1, 2]).unwrap();
        assert_eq!(
            apply_permutation(&cycle, &c3).unwrap().categories(),
            &[cat(1), cat(2), cat(0)]
        );
        assert!(apply_permutation(&cycle, &c).is_err());
        assert!(CategoryPermutation::new(&[0, 0]).is_err());
        assert!(CategoryPermutation::new(&[0, 2]).is_err());
    }

    #[test]
    fn all_permutations_lexicographic() {
        let all = CategoryPermutation::all(3);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all[0].is_identity());
    }

    #[test]
    fn vector_code_puts_first_individual_most_significant() {
        let p = params(3, 3, 2);
        let v = CategoryVector::from_indices(&p, &[1, 0, 0]).unwrap();
        assert_eq!(v.encode(&p), 4);
        assert_eq!(CategoryVector::decode(&p, 4).unwrap(), v);
        assert!(CategoryVector::decode(&p, 8).is_err());
    }

    #[test]
    fn smallest_extension_is_first_in_enumeration() {
        for (n, m, rho) in [(2, 3, 2), (2, 4, 3), (2, 3, 3), (2, 5, 3)] {
            let p = params(n, m, rho);
            for x in 0..m {
                for c in p.categories() {
                    let expected = enumerate_classifications(&p)
                        .find(|k| k.get(x) == c)
                        .unwrap();
                    assert_eq!(Classification::smallest_with(&p, x, c), expected);
                }
            }
        }
    }

    #[test]
    fn profile_space_index_matches_lex_order() {
        let p = params(2, 3, 2);
        let space = ProfileSpace::new(&p, Budget::default()).unwrap();
        assert_eq!(space.len(), 36);
        let all: Vec<_> = space.iter().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        let codes = space.column_codes();
        for (i, prof) in all.iter().enumerate() {
            for x in 0..3 {
                assert_eq!(
                    codes[i * 3 + x] as usize,
                    prof.column(x).unwrap().encode(&p)
                );
            }
        }
        assert!(matches!(
            ProfileSpace::new(&p, Budget(35)),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
