//! Brute-force reference implementations, written directly from the
//! definitions and sharing no code with the library's search.

#![allow(dead_code)]

use std::collections::BTreeSet;

use classagg::{Category, IndependentCaf};

pub type Tables = Vec<Vec<usize>>;

/// All surjections from `m` objects onto `rho` categories, lexicographic.
pub fn surjections(m: usize, rho: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for code in 0..rho.pow(m as u32) {
        let mut c = vec![0; m];
        let mut rest = code;
        for slot in c.iter_mut().rev() {
            *slot = rest % rho;
            rest /= rho;
        }
        if (0..rho).all(|p| c.contains(&p)) {
            out.push(c);
        }
    }
    out
}

/// Every profile as a list of per-individual classifications.
pub fn profiles(n: usize, m: usize, rho: usize) -> Vec<Vec<Vec<usize>>> {
    let cs = surjections(m, rho);
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Vec<usize>>| {
                cs.iter().map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Base-`rho` code of a column, individual 1 most significant.
pub fn code(column: &[usize], rho: usize) -> usize {
    column.iter().fold(0, |acc, &p| acc * rho + p)
}

pub fn eval(tables: &Tables, profile: &[Vec<usize>], rho: usize) -> Vec<usize> {
    (0..tables.len())
        .map(|x| {
            let column: Vec<usize> = profile.iter().map(|c| c[x]).collect();
            tables[x][code(&column, rho)]
        })
        .collect()
}

pub fn valid(tables: &Tables, profiles: &[Vec<Vec<usize>>], rho: usize) -> bool {
    profiles.iter().all(|p| {
        let out = eval(tables, p, rho);
        (0..rho).all(|q| out.contains(&q))
    })
}

pub fn sovereign(tables: &Tables, profiles: &[Vec<Vec<usize>>], rho: usize) -> bool {
    let mut hit = BTreeSet::new();
    for p in profiles {
        for (x, q) in eval(tables, p, rho).into_iter().enumerate() {
            hit.insert((x, q));
        }
    }
    hit.len() == tables.len() * rho
}

pub fn unanimous(tables: &Tables, m: usize, n: usize, rho: usize) -> bool {
    surjections(m, rho).into_iter().all(|c| {
        let profile = vec![c.clone(); n];
        eval(tables, &profile, rho) == c
    })
}

/// Every elementary table over `P^N`, optionally only those with
/// `t(p, ..., p) = p`.
pub fn elementary_tables(n: usize, rho: usize, unanimous_on_constants: bool) -> Vec<Vec<usize>> {
    let k = rho.pow(n as u32);
    let constant = |p: usize| code(&vec![p; n], rho);
    surjections_or_all(k, rho)
        .into_iter()
        .filter(|t| !unanimous_on_constants || (0..rho).all(|p| t[constant(p)] == p))
        .collect()
}

fn surjections_or_all(k: usize, rho: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for code in 0..rho.pow(k as u32) {
        let mut t = vec![0; k];
        let mut rest = code;
        for slot in t.iter_mut().rev() {
            *slot = rest % rho;
            rest /= rho;
        }
        out.push(t);
    }
    out
}

/// All `m`-tuples of the given tables, lexicographic.
pub fn tuples(tables: &[Vec<usize>], m: usize) -> Vec<Tables> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|prefix: Tables| {
                tables.iter().map(move |t| {
                    let mut p = prefix.clone();
                    p.push(t.clone());
                    p
                })
            })
            .collect();
    }
    out
}

pub fn permutations(rho: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(prefix: &mut Vec<usize>, rho: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == rho {
            out.push(prefix.clone());
            return;
        }
        for p in 0..rho {
            if !prefix.contains(&p) {
                prefix.push(p);
                go(prefix, rho, out);
                prefix.pop();
            }
        }
    }
    go(&mut Vec::new(), rho, &mut out);
    out
}

/// Tables of the essential dictatorship `(d, pi)`, `d` zero-based.
pub fn essential_tables(n: usize, m: usize, rho: usize, d: usize, pi: &[usize]) -> Tables {
    let k = rho.pow(n as u32);
    let table: Vec<usize> = (0..k)
        .map(|c| {
            let digit = c / rho.pow((n - 1 - d) as u32) % rho;
            pi[digit]
        })
        .collect();
    vec![table; m]
}

/// `(d, pi)` if the tuple is an essential dictatorship.
pub fn essential_dictator(tables: &Tables, n: usize, rho: usize) -> Option<(usize, Vec<usize>)> {
    let m = tables.len();
    for d in 0..n {
        for pi in permutations(rho) {
            if essential_tables(n, m, rho, d, &pi) == *tables {
                return Some((d, pi));
            }
        }
    }
    None
}

pub fn raw(caf: &IndependentCaf) -> Tables {
    caf.tables()
        .iter()
        .map(|t| t.table().iter().map(|c: &Category| c.index()).collect())
        .collect()
}

/// Valid tuples passing `keep`, by exhaustive scan.
pub fn brute_population(
    n: usize,
    m: usize,
    rho: usize,
    unanimous_on_constants: bool,
    keep: impl Fn(&Tables, &[Vec<Vec<usize>>]) -> bool,
) -> BTreeSet<Tables> {
    let profiles = profiles(n, m, rho);
    let tables = elementary_tables(n, rho, unanimous_on_constants);
    tuples(&tables, m)
        .into_iter()
        .filter(|t| valid(t, &profiles, rho) && keep(t, &profiles))
        .collect()
}
