//! Picks a construction for every `(a,b)` following the case split of the
//! upper-bound proofs; search covers the cases without a construction.

use std::collections::HashMap;

use super::*;
use crate::certificate::{expected_size, WitnessCertificate};
use crate::domain::Params;
use crate::formulas::{floor_log, Group};
use crate::search::{search_witness, SearchConfig, SearchOutcome};

type Built = (CodeSet, ConstructionTag);

/// Memoizing witness builder.
pub struct Dispatcher {
    cfg: SearchConfig,
    memo: HashMap<(usize, usize, Group), Option<Built>>,
    /// Candidates spent on searches that failed.
    pub spent: u64,
}

impl Dispatcher {
    pub fn new(cfg: SearchConfig) -> Dispatcher {
        Dispatcher {
            cfg,
            memo: HashMap::new(),
            spent: 0,
        }
    }

    fn target(a: usize, b: usize, group: Group) -> Result<(Params, usize)> {
        let params = Params::new(a, b)?;
        let size = expected_size(params, group)?
            .ok_or_else(|| domain("the action on (2,2)-partitions is not faithful"))?;
        Ok((params, size as usize))
    }

    fn search(&mut self, a: usize, b: usize, size: usize, group: Group) -> Result<Option<Built>> {
        match search_witness(a, b, size, group, &self.cfg)? {
            SearchOutcome::Found { codeset, trial, .. } => Ok(Some((
                codeset,
                ConstructionTag::Search {
                    seed: self.cfg.seed,
                    trial,
                },
            ))),
            SearchOutcome::Exhausted { candidates } => {
                self.spent += candidates;
                Ok(None)
            }
        }
    }

    fn complement(&mut self, a_prime: usize, b: usize, kappa: usize) -> Result<Option<Built>> {
        let Some((inner, tag)) = self.sym_codeset(a_prime, b)? else {
            return Ok(None);
        };
        let set = construct_complement(&inner, kappa)?;
        Ok(Some((
            set,
            ConstructionTag::Complement {
                a_prime,
                kappa,
                inner: Box::new(tag),
            },
        )))
    }

    /// A code set whose columns form a minimal Sym base, or `None` when a
    /// needed search ran out of budget.
    pub fn sym_codeset(&mut self, a: usize, b: usize) -> Result<Option<Built>> {
        let (_, size) = Self::target(a, b, Group::Sym)?;
        if let Some(hit) = self.memo.get(&(a, b, Group::Sym)) {
            return Ok(hit.clone());
        }
        let built = if b == 2 {
            self.sym_b2(a, size)?
        } else {
            self.sym_wide(a, b, size)?
        };
        if let Some((set, tag)) = &built {
            if set.width() != size || !set.is_regular(a) {
                return Err(domain(format!("{tag} gave width {} for ({a},{b})", set.width())));
            }
        }
        self.memo.insert((a, b, Group::Sym), built.clone());
        Ok(built)
    }

    fn sym_b2(&mut self, a: usize, size: usize) -> Result<Option<Built>> {
        if a <= 4 {
            return self.search(a, 2, size, Group::Sym);
        }
        let i = floor_log(2, a as u64) as usize;
        let p = 1usize << i;
        let r = a - p;
        if r == 0 {
            Ok(Some((construct_b2_power(i)?, ConstructionTag::B2Power { i })))
        } else if r == p - 1 {
            Ok(Some((
                construct_b2_power_minus1(i + 1)?,
                ConstructionTag::B2PowerMinus1 { i: i + 1 },
            )))
        } else if r == p - 2 {
            Ok(Some((construct_b2_rminus2(i)?, ConstructionTag::B2RMinus2 { i })))
        } else {
            self.complement(2 * p - a, 2, i + 2)
        }
    }

    fn sym_wide(&mut self, a: usize, b: usize, size: usize) -> Result<Option<Built>> {
        if a <= b {
            return self.search(a, b, size, Group::Sym);
        }
        let l = floor_log(b as u64, a as u64) as usize;
        let bl = power(b, l)?;
        let (k, r) = (a / bl, a % bl);
        if bl <= 4 {
            return match (a, b) {
                (6, 3) | (6, 4) | (8, 4) | (10, 4) | (12, 4) => {
                    Ok(Some((construct_maincase(b, l, k, r)?, ConstructionTag::Maincase { b, l, k, r })))
                }
                (8, 3) | (15, 4) => Ok(Some((construct_small(b, 2, a)?, ConstructionTag::Small { b, l: 2, a }))),
                (11, 4) => self.complement(5, 4, 3),
                (13, 4) => self.complement(3, 4, 3),
                (14, 4) => self.complement(2, 4, 3),
                _ => self.search(a, b, size, Group::Sym),
            };
        }
        let next = bl * b;
        if k <= b - 2 {
            if r == 1 {
                Ok(Some((construct_r1(b, l, k)?, ConstructionTag::R1 { b, l, k })))
            } else if r == bl - 1 {
                self.complement((b - k - 1) * bl + 1, b, l + 2)
            } else {
                Ok(Some((construct_maincase(b, l, k, r)?, ConstructionTag::Maincase { b, l, k, r })))
            }
        } else if r == 0 {
            Ok(Some((construct_maincase(b, l, k, 0)?, ConstructionTag::Maincase { b, l, k, r: 0 })))
        } else if a + 3 <= next {
            let a_prime = next - a;
            let inner = construct_small(b, l, a_prime)?;
            let set = construct_complement(&inner, l + 2)?;
            Ok(Some((
                set,
                ConstructionTag::Complement {
                    a_prime,
                    kappa: l + 2,
                    inner: Box::new(ConstructionTag::Small { b, l, a: a_prime }),
                },
            )))
        } else if a + 1 == next {
            Ok(Some((construct_small(b, l + 1, a)?, ConstructionTag::Small { b, l: l + 1, a })))
        } else {
            self.complement(2, b, l + 2)
        }
    }

    /// A code set whose columns form a minimal Alt base, or `None` when a
    /// needed search ran out of budget.
    pub fn alt_codeset(&mut self, a: usize, b: usize) -> Result<Option<Built>> {
        let (_, size) = Self::target(a, b, Group::Alt)?;
        let (_, sym_size) = Self::target(a, b, Group::Sym)?;
        if size == sym_size {
            return self.sym_codeset(a, b);
        }
        if let Some(hit) = self.memo.get(&(a, b, Group::Alt)) {
            return Ok(hit.clone());
        }
        let built = if b >= 3 {
            match exponent(b, a + 1) {
                Some(k) if alt_bk_minus1_applies(b, k) => Some(construct_alt_bk_minus1(b, k)?),
                _ => self.search(a, b, size, Group::Alt)?,
            }
        } else if let Some(k) = exponent(2, a + 1).filter(|&k| k >= 3) {
            Some((construct_alt_b2(k, AltB2Variant::Minus1)?, ConstructionTag::AltB2Minus1 { k }))
        } else if let Some(k) = exponent(2, a + 2).filter(|&k| k >= 3) {
            Some((construct_alt_b2(k, AltB2Variant::Minus2)?, ConstructionTag::AltB2Minus2 { k }))
        } else {
            self.search(a, b, size, Group::Alt)?
        };
        if let Some((set, tag)) = &built {
            if set.width() != size || !set.is_regular(a) {
                return Err(domain(format!("{tag} gave width {} for ({a},{b})", set.width())));
            }
        }
        self.memo.insert((a, b, Group::Alt), built.clone());
        Ok(built)
    }

    /// A verified certificate, or one marked unavailable when search failed.
    pub fn witness(&mut self, a: usize, b: usize, group: Group) -> Result<WitnessCertificate> {
        let (params, _) = Self::target(a, b, group)?;
        let spent = self.spent;
        let built = match group {
            Group::Sym => self.sym_codeset(a, b)?,
            Group::Alt => self.alt_codeset(a, b)?,
        };
        match built {
            Some((set, tag)) => WitnessCertificate::certify(params, group, set, tag),
            None => Ok(WitnessCertificate::unavailable(
                params,
                group,
                ConstructionTag::Search {
                    seed: self.cfg.seed,
                    trial: 0,
                },
                self.spent - spent,
            )),
        }
    }
}

/// `k` with `b^k = x`, if any.
fn exponent(b: usize, x: usize) -> Option<usize> {
    let mut k = 0;
    let mut v = 1usize;
    while v < x {
        v = v.checked_mul(b)?;
        k += 1;
    }
    (v == x).then_some(k)
}

/// A verified Sym witness with exactly the base size many partitions.
pub fn dispatch_sym_witness(a: usize, b: usize, cfg: &SearchConfig) -> Result<WitnessCertificate> {
    Dispatcher::new(cfg.clone()).witness(a, b, Group::Sym)
}

/// A verified Alt witness with exactly the base size many partitions.
pub fn dispatch_alt_witness(a: usize, b: usize, cfg: &SearchConfig) -> Result<WitnessCertificate> {
    Dispatcher::new(cfg.clone()).witness(a, b, Group::Alt)
}
