//! `selftest`: quick checks run in seconds, full adds the construction sweeps.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use clap::ValueEnum;

use crate::constructions::{
    alt_bk_minus1_applies, construct_alt_b2, construct_alt_bk_minus1, triple_8_3, AltB2Variant, Dispatcher,
};
use crate::formulas::{a_le_b_table, base_size_alt, base_size_sym, Group};
use crate::search::{minimal_base_size_bruteforce, SearchConfig};
use crate::verifier::{decide, is_base};

use super::load_partitions;

pub const TRIPLE_FIXTURE: &str = include_str!("../../fixtures/triple_8_3_alt.witness");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<String, String>) -> Check {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Check {
        name,
        passed,
        detail: format!("{detail} [{:.2}s]", t.elapsed().as_secs_f64()),
    }
}

fn value(a: usize, b: usize, group: Group) -> Option<u32> {
    match group {
        Group::Sym => base_size_sym(a, b),
        Group::Alt => base_size_alt(a, b),
    }
    .ok()
    .and_then(|x| x.value)
}

/// Stated base sizes as (a, b, sym, alt).
const STATED: [(usize, usize, u32, u32); 13] = [
    (2, 3, 4, 3),
    (4, 2, 5, 4),
    (3, 2, 4, 3),
    (3, 6, 3, 2),
    (3, 7, 3, 2),
    (4, 7, 3, 2),
    (7, 3, 4, 3),
    (4, 3, 3, 3),
    (5, 3, 3, 3),
    (5, 4, 3, 3),
    (7, 4, 3, 3),
    (9, 4, 3, 3),
    (8, 3, 4, 3),
];

fn formula_values() -> Result<String, String> {
    for &(a, b, s, t) in &STATED {
        if value(a, b, Group::Sym) != Some(s) || value(a, b, Group::Alt) != Some(t) {
            return Err(format!("({a},{b}) gives {:?}/{:?}", value(a, b, Group::Sym), value(a, b, Group::Alt)));
        }
    }
    for a in 3..=12 {
        if value(a, a + 2, Group::Sym) != Some(3) {
            return Err(format!("({a},{}) is not 3", a + 2));
        }
    }
    Ok(format!("{} stated values", STATED.len() + 10))
}

fn table_agrees() -> Result<String, String> {
    let mut pairs = 0;
    for b in 2..=40 {
        for a in 2..=b {
            let t = a_le_b_table(a, b).map_err(|e| e.to_string())?;
            let s = base_size_sym(a, b).map_err(|e| e.to_string())?;
            if t.value != s.value {
                return Err(format!("({a},{b}): table {:?}, formula {:?}", t.value, s.value));
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn oracle_grid() -> Result<String, String> {
    let grid = [(2, 3), (3, 2), (2, 4), (4, 2), (2, 5), (3, 3)];
    for (a, b) in grid {
        for group in [Group::Sym, Group::Alt] {
            let want = value(a, b, group).ok_or("undefined")? as usize;
            let got = minimal_base_size_bruteforce(a, b, group, want).map_err(|e| e.to_string())?;
            if got != Some(want) {
                return Err(format!("({a},{b}) {group}: exhaustive {got:?}, formula {want}"));
            }
        }
    }
    Ok(format!("{} instances", 2 * grid.len()))
}

fn fixture(text: &str) -> Result<String, String> {
    let ps = load_partitions(text, 1).map_err(|e| e.to_string())?;
    if ps != triple_8_3() {
        return Err("partitions differ from the explicit (8,3) triple".into());
    }
    let v = is_base(&ps, Group::Alt).map_err(|e| e.to_string())?;
    if !v.is_base {
        return Err("not an Alt base".into());
    }
    Ok("Alt base".into())
}

fn round_trip() -> Result<String, String> {
    let mut d = Dispatcher::new(SearchConfig::deterministic(0));
    let cases = [(2, 3, Group::Sym), (11, 4, Group::Sym), (7, 2, Group::Alt), (6, 2, Group::Sym)];
    for (a, b, group) in cases {
        let cert = d.witness(a, b, group).map_err(|e| e.to_string())?;
        let text = super::format::WitnessFile::from_certificate(&cert).serialize();
        let ps = load_partitions(&text, 0).map_err(|e| e.to_string())?;
        if !is_base(&ps, group).map_err(|e| e.to_string())?.is_base {
            return Err(format!("({a},{b}) {group} witness rejected"));
        }
    }
    Ok(format!("{} witnesses", cases.len()))
}

fn sweep(bs: std::ops::RangeInclusive<usize>, amax: impl Fn(usize) -> usize) -> Result<String, String> {
    let mut d = Dispatcher::new(SearchConfig::deterministic(1));
    let mut n = 0;
    for b in bs {
        for a in (if b == 2 { 3 } else { b + 1 })..=amax(b) {
            let cert = d.witness(a, b, Group::Sym).map_err(|e| e.to_string())?;
            if !cert.is_minimal_verified().map_err(|e| e.to_string())? {
                return Err(format!("({a},{b}): {} {}", cert.provenance, cert.status.as_str()));
            }
            n += 1;
        }
    }
    Ok(format!("{n} instances"))
}

fn alternating() -> Result<String, String> {
    let mut n = 0;
    for k in 3..=5 {
        for b in 3.. {
            if !alt_bk_minus1_applies(b, k) {
                break;
            }
            if (b as u64).pow(k as u32 + 1) > 1 << 20 {
                continue;
            }
            let (set, tag) = construct_alt_bk_minus1(b, k).map_err(|e| e.to_string())?;
            if !decide(&set, Group::Alt).map_err(|e| e.to_string())?.is_base {
                return Err(format!("{tag} rejected"));
            }
            n += 1;
        }
    }
    for k in 3..=10 {
        for variant in [AltB2Variant::Minus1, AltB2Variant::Minus2] {
            let set = construct_alt_b2(k, variant).map_err(|e| e.to_string())?;
            if !decide(&set, Group::Alt).map_err(|e| e.to_string())?.is_base {
                return Err(format!("alt b=2 k={k} {variant:?} rejected"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} constructions"))
}

/// Runs the checks of `level`; `fixture` replaces the built-in triple file.
pub fn run_checks(level: Level, fixture_text: Option<&str>) -> Vec<Check> {
    let text = fixture_text.unwrap_or(TRIPLE_FIXTURE);
    let mut out = vec![
        check("formula-values", formula_values),
        check("a-le-b-table", table_agrees),
        check("oracle-grid", oracle_grid),
        check("fixture-8-3-alt", || fixture(text)),
        check("witness-round-trip", round_trip),
    ];
    if level == Level::Full {
        out.push(check("sweep-b-ge-3", || sweep(3..=8, |_| 300)));
        out.push(check("sweep-b-2", || sweep(2..=2, |_| 1024)));
        out.push(check("alternating-constructions", alternating));
    }
    out
}

pub(super) fn cmd_selftest(level: Level, fixture: Option<&Path>, out: &mut dyn Write) -> crate::Result<i32> {
    let text = match fixture {
        Some(p) => Some(std::fs::read_to_string(p).map_err(super::io)?),
        None => None,
    };
    let checks = run_checks(level, text.as_deref());
    let mut failed = 0;
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!c.passed);
        writeln!(out, "{tag} {}: {}", c.name, c.detail).map_err(super::io)?;
    }
    writeln!(out, "{} of {} checks passed", checks.len() - failed, checks.len()).map_err(super::io)?;
    Ok(if failed == 0 { super::EXIT_OK } else { super::EXIT_NOT_BASE })
}
