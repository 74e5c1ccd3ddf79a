//! `table stirling-mod`: closed-form residues next to the exact oracle.

use std::io::{self, Write};
use std::ops::RangeInclusive;

use serde::Serialize;

use stirmod_core::modring::factorize;
use stirmod_core::stirling::{big_mod, stirling_exact, stirling_mod_pr};
use stirmod_core::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub n: u64,
    pub k: u64,
    pub p: u64,
    pub r: u32,
    pub branch: String,
    pub value: u64,
    pub oracle: u64,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Parse `A..B` (inclusive, `2 <= A <= B`).
pub fn parse_range(s: &str) -> std::result::Result<RangeInclusive<u64>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got '{s}'"))?;
    let parse = |x: &str| {
        x.trim()
            .parse::<u64>()
            .map_err(|e| format!("bad bound '{x}': {e}"))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if a < 1 || a > b {
        return Err(format!("empty or invalid range {a}..{b}"));
    }
    Ok(a..=b)
}

/// Rows ordered by n, then k, then p.
pub fn rows_for(n: u64) -> Result<Vec<Row>> {
    let primes = factorize(n);
    let mut rows = Vec::new();
    for k in 0..=n {
        let exact = stirling_exact(n, k as i64)?;
        for &(p, r) in &primes {
            let s = stirling_mod_pr(n, k as i64, p)?;
            let oracle = big_mod(&exact, s.modulus.modulus()).value();
            rows.push(Row {
                n,
                k,
                p,
                r,
                branch: s.branch.name().to_string(),
                value: s.value.value(),
                oracle,
                matches: oracle == s.value.value(),
            });
        }
    }
    Ok(rows)
}

pub fn write_csv(rows: impl IntoIterator<Item = Row>, out: &mut dyn Write) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}

pub fn write_json(rows: impl IntoIterator<Item = Row>, out: &mut dyn Write) -> io::Result<()> {
    for row in rows {
        serde_json::to_writer(&mut *out, &row)?;
        writeln!(out)?;
    }
    Ok(())
}
