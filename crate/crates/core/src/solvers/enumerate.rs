//! Optimal-slate enumeration driven by a consistency oracle.
//!
//! Every exact solver can answer "is there an optimal slate that contains all
//! of `forced` and none of `excluded`?" once the optimal value is known. A
//! depth-first include/exclude walk over the indices in increasing order then
//! yields the lexicographically smallest optimal slate (include-first greedy)
//! and, when asked, the complete set of optimal slates in lexicographic order.

use crate::error::{Error, Result};

pub(crate) trait Consistency {
    /// `forced` is sorted ascending; `excluded[i]` marks indices that must not
    /// be used. `forced.len() <= k` always holds.
    fn consistent(&mut self, forced: &[usize], excluded: &[bool]) -> Result<bool>;
}

impl<F> Consistency for F
where
    F: FnMut(&[usize], &[bool]) -> Result<bool>,
{
    fn consistent(&mut self, forced: &[usize], excluded: &[bool]) -> Result<bool> {
        self(forced, excluded)
    }
}

/// Lexicographically smallest optimal slate. The caller guarantees that an
/// optimal slate exists (the unconstrained query is true).
pub(crate) fn lex_first(n: usize, k: usize, oracle: &mut impl Consistency) -> Result<(Vec<usize>, u64)> {
    let mut forced = Vec::with_capacity(k);
    let mut excluded = vec![false; n];
    let mut queries = 0u64;
    for i in 0..n {
        if forced.len() == k {
            break;
        }
        if n - i == k - forced.len() {
            forced.extend(i..n);
            break;
        }
        forced.push(i);
        queries += 1;
        if !oracle.consistent(&forced, &excluded)? {
            forced.pop();
            excluded[i] = true;
        }
    }
    if forced.len() != k {
        return Err(Error::Internal(format!(
            "consistency oracle admitted no slate of size {k}"
        )));
    }
    Ok((forced, queries))
}

/// All optimal slates in lexicographic order, failing once more than `cap`
/// have been found.
pub(crate) fn all_consistent(
    n: usize,
    k: usize,
    cap: usize,
    oracle: &mut impl Consistency,
) -> Result<(Vec<Vec<usize>>, u64)> {
    struct Walk<'a, O> {
        n: usize,
        k: usize,
        cap: usize,
        oracle: &'a mut O,
        forced: Vec<usize>,
        excluded: Vec<bool>,
        out: Vec<Vec<usize>>,
        queries: u64,
    }

    impl<O: Consistency> Walk<'_, O> {
        fn visit(&mut self, i: usize) -> Result<()> {
            if self.forced.len() == self.k {
                if self.out.len() == self.cap {
                    return Err(Error::Incomplete(format!(
                        "more than {} optimal slates",
                        self.cap
                    )));
                }
                self.out.push(self.forced.clone());
                return Ok(());
            }
            let missing = self.k - self.forced.len();
            if self.n - i < missing {
                return Ok(());
            }
            self.forced.push(i);
            self.queries += 1;
            if self.oracle.consistent(&self.forced, &self.excluded)? {
                self.visit(i + 1)?;
            }
            self.forced.pop();
            if self.n - i > missing {
                self.excluded[i] = true;
                self.queries += 1;
                if self.oracle.consistent(&self.forced, &self.excluded)? {
                    self.visit(i + 1)?;
                }
                self.excluded[i] = false;
            }
            Ok(())
        }
    }

    let mut walk = Walk {
        n,
        k,
        cap,
        oracle,
        forced: Vec::with_capacity(k),
        excluded: vec![false; n],
        out: Vec::new(),
        queries: 0,
    };
    walk.visit(0)?;
    Ok((walk.out, walk.queries))
}
