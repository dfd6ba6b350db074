//! Plain-text input files and CSV output.
//!
//! Every input format is whitespace separated with `#` comments. Line numbers
//! in errors are 1-based and count comment lines.

use std::io::Write;

use pressurekit_core::dimension::{Branch, CookieCutter, DimensionReport};
use pressurekit_core::linalg::SmallMatrix;
use pressurekit_core::pressure::{CoverProblem, PressureEstimate, ZSet};
use pressurekit_core::{KingmanBracket, MarkovMeasure, PotentialSequence, SymbolicSystem, Word};

use crate::error::{Error, Result};

/// Non-empty lines with comments stripped, paired with their line number.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::config(format!("line {line}: bad {what} '{tok}'")))
}

fn row<T: std::str::FromStr>(toks: &[&str], len: usize, line: usize, what: &str) -> Result<Vec<T>> {
    if toks.len() != len {
        return Err(Error::config(format!(
            "line {line}: {what} row has {} entries, expected {len}",
            toks.len()
        )));
    }
    toks.iter().map(|t| num(t, line, what)).collect()
}

/// `k θ`, then `k` rows of 0/1 entries.
pub fn parse_system(text: &str) -> Result<SymbolicSystem> {
    let mut it = lines(text);
    let (l, head) = it.next().ok_or_else(|| Error::config("empty system file"))?;
    if head.len() != 2 {
        return Err(Error::config(format!("line {l}: expected 'k theta'")));
    }
    let k: usize = num(head[0], l, "alphabet size")?;
    let theta: f64 = num(head[1], l, "theta")?;
    let mut rows = Vec::with_capacity(k);
    for _ in 0..k {
        let (l, toks) = it
            .next()
            .ok_or_else(|| Error::config(format!("system file: expected {k} transition rows")))?;
        let r = row::<u8>(&toks, k, l, "transition")?;
        if r.iter().any(|&e| e > 1) {
            return Err(Error::config(format!("line {l}: transition entries must be 0 or 1")));
        }
        rows.push(r);
    }
    if let Some((l, _)) = it.next() {
        return Err(Error::config(format!("line {l}: trailing data after transition matrix")));
    }
    Ok(SymbolicSystem::new(&rows, theta)?)
}

pub fn write_system(sys: &SymbolicSystem) -> String {
    let mut s = format!("{} {}\n", sys.alphabet_size(), sys.theta());
    for r in sys.transition() {
        let r: Vec<String> = r.iter().map(u8::to_string).collect();
        s.push_str(&r.join(" "));
        s.push('\n');
    }
    s
}

/// `k`, then `k` rows of the stochastic matrix.
pub fn parse_measure(text: &str) -> Result<MarkovMeasure> {
    let mut it = lines(text);
    let (l, head) = it.next().ok_or_else(|| Error::config("empty measure file"))?;
    if head.len() != 1 {
        return Err(Error::config(format!("line {l}: expected 'k'")));
    }
    let k: usize = num(head[0], l, "alphabet size")?;
    let mut rows = Vec::with_capacity(k);
    for _ in 0..k {
        let (l, toks) = it
            .next()
            .ok_or_else(|| Error::config(format!("measure file: expected {k} rows")))?;
        rows.push(row::<f64>(&toks, k, l, "probability")?);
    }
    if let Some((l, _)) = it.next() {
        return Err(Error::config(format!("line {l}: trailing data after stochastic matrix")));
    }
    Ok(MarkovMeasure::new(&rows)?)
}

pub fn write_measure(mu: &MarkovMeasure) -> String {
    let mut s = format!("{}\n", mu.alphabet_size());
    for r in mu.rows() {
        let r: Vec<String> = r.iter().map(f64::to_string).collect();
        s.push_str(&r.join(" "));
        s.push('\n');
    }
    s
}

/// Potential files start with a kind tag:
///
/// ```text
/// birkhoff <k> <L>          cocycle_norm <k> <dim>      (or cocycle_min_norm)
/// 00 0.5                    2 0                         # A_0, row-major
/// 01 -1                     0 0.5
/// ...                       0.5 0                       # A_1
///                           0 2
/// ```
///
/// An optional trailing `scale <c>` line yields `c · F`.
pub fn parse_potential(text: &str) -> Result<PotentialSequence> {
    let all: Vec<(usize, Vec<&str>)> = lines(text).collect();
    let (l, head) = all.first().ok_or_else(|| Error::config("empty potential file"))?;
    let (body, scale) = match all.last() {
        Some((l, t)) if all.len() > 1 && t[0] == "scale" => {
            if t.len() != 2 {
                return Err(Error::config(format!("line {l}: expected 'scale c'")));
            }
            (&all[1..all.len() - 1], Some(num::<f64>(t[1], *l, "scale")?))
        }
        _ => (&all[1..], None),
    };
    if head.len() != 3 {
        return Err(Error::config(format!("line {l}: expected '<kind> <k> <L or dim>'")));
    }
    let k: usize = num(head[1], *l, "alphabet size")?;
    let p: usize = num(head[2], *l, "locality/dimension")?;
    let pot = match head[0] {
        "birkhoff" => {
            let size = k.checked_pow(p as u32).filter(|&s| s <= 1 << 20).ok_or_else(|| {
                Error::config(format!("line {l}: birkhoff table k^L too large"))
            })?;
            let mut table = vec![None; size];
            for (l, toks) in body {
                if toks.len() != 2 {
                    return Err(Error::config(format!("line {l}: expected '<word> <value>'")));
                }
                let w = Word::parse(toks[0])
                    .filter(|w| w.len() == p && w.symbols().iter().all(|&s| (s as usize) < k))
                    .ok_or_else(|| Error::config(format!("line {l}: bad {p}-word '{}'", toks[0])))?;
                let idx = w.symbols().iter().fold(0, |acc, &s| acc * k + s as usize);
                if table[idx].replace(num::<f64>(toks[1], *l, "value")?).is_some() {
                    return Err(Error::config(format!("line {l}: duplicate word '{}'", toks[0])));
                }
            }
            // words never listed are inadmissible ones; give them 0
            PotentialSequence::birkhoff(k, p, table.into_iter().map(|v| v.unwrap_or(0.0)).collect())?
        }
        kind @ ("cocycle_norm" | "cocycle_min_norm") => {
            if body.len() != k * p {
                return Err(Error::config(format!(
                    "{kind}: expected {} matrix rows, found {}",
                    k * p,
                    body.len()
                )));
            }
            let mut mats = Vec::with_capacity(k);
            for chunk in body.chunks(p) {
                let rows = chunk
                    .iter()
                    .map(|(l, t)| row::<f64>(t, p, *l, "matrix"))
                    .collect::<Result<Vec<_>>>()?;
                mats.push(SmallMatrix::from_rows(&rows)?);
            }
            if kind == "cocycle_norm" {
                PotentialSequence::cocycle_norm(mats)?
            } else {
                PotentialSequence::cocycle_min_norm(mats)?
            }
        }
        other => return Err(Error::config(format!("line {l}: unknown potential kind '{other}'"))),
    };
    Ok(match scale {
        Some(c) => PotentialSequence::scaled(c, &pot),
        None => pot,
    })
}

/// ```text
/// n_min 4
/// depth_cap 10
/// words 01 110        # or: full
/// ```
pub fn parse_cover(text: &str) -> Result<CoverProblem> {
    let (mut n_min, mut depth_cap, mut z) = (None, None, None);
    for (l, toks) in lines(text) {
        match toks[0] {
            "n_min" | "depth_cap" if toks.len() == 2 => {
                let v: usize = num(toks[1], l, toks[0])?;
                if toks[0] == "n_min" {
                    n_min = Some(v);
                } else {
                    depth_cap = Some(v);
                }
            }
            "full" if toks.len() == 1 => z = Some(ZSet::Full),
            "words" if toks.len() > 1 => {
                let ws = toks[1..]
                    .iter()
                    .map(|t| Word::parse(t).ok_or_else(|| Error::config(format!("line {l}: bad word '{t}'"))))
                    .collect::<Result<Vec<_>>>()?;
                z = Some(ZSet::Words(ws));
            }
            _ => return Err(Error::config(format!("line {l}: unrecognised cover line"))),
        }
    }
    Ok(CoverProblem {
        z: z.ok_or_else(|| Error::config("cover file: missing 'words' or 'full'"))?,
        n_min: n_min.ok_or_else(|| Error::config("cover file: missing n_min"))?,
        depth_cap: depth_cap.ok_or_else(|| Error::config("cover file: missing depth_cap"))?,
    })
}

pub fn write_cover(p: &CoverProblem) -> String {
    let z = match &p.z {
        ZSet::Full => "full".to_string(),
        ZSet::Words(ws) => {
            let ws: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
            format!("words {}", ws.join(" "))
        }
    };
    format!("n_min {}\ndepth_cap {}\n{z}\n", p.n_min, p.depth_cap)
}

/// `branches <r>`, then one line per branch: `affine <slope> <offset>` or
/// `sine <slope> <offset> <amplitude>`.
pub fn parse_cutter(text: &str) -> Result<CookieCutter> {
    let mut it = lines(text);
    let (l, head) = it.next().ok_or_else(|| Error::config("empty cutter file"))?;
    if head.len() != 2 || head[0] != "branches" {
        return Err(Error::config(format!("line {l}: expected 'branches r'")));
    }
    let r: usize = num(head[1], l, "branch count")?;
    let mut branches = Vec::with_capacity(r);
    for (l, toks) in it {
        let vals = toks[1..]
            .iter()
            .map(|t| num::<f64>(t, l, "coefficient"))
            .collect::<Result<Vec<_>>>()?;
        branches.push(match (toks[0], vals.as_slice()) {
            ("affine", &[slope, offset]) => Branch::Affine { slope, offset },
            ("sine", &[slope, offset, amplitude]) => Branch::Sine { slope, offset, amplitude },
            _ => return Err(Error::config(format!("line {l}: expected 'affine s o' or 'sine s o a'"))),
        });
    }
    if branches.len() != r {
        return Err(Error::config(format!("cutter file: {} branches listed, header says {r}", branches.len())));
    }
    Ok(CookieCutter::new(branches)?)
}

/// Header of the pressure result CSV.
pub const PRESSURE_HEADER: [&str; 10] = [
    "kind",
    "mode",
    "ball_weighting",
    "n_or_N",
    "epsilon_m",
    "delta",
    "value",
    "lower",
    "upper",
    "certified",
];

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

/// Per-`n` rows followed by a `tail` row carrying the reported value.
pub fn write_pressure_csv<W: Write>(out: W, estimates: &[PressureEstimate]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PRESSURE_HEADER)?;
    for e in estimates {
        let fixed = [e.kind.name(), e.mode.name(), e.weighting.name()];
        for p in &e.per_n {
            w.write_record(
                fixed.iter().map(|s| s.to_string()).chain([
                    p.n.to_string(),
                    e.m.to_string(),
                    opt(e.delta),
                    p.value.to_string(),
                    p.lower.to_string(),
                    p.upper.to_string(),
                    "false".into(),
                ]),
            )?;
        }
        w.write_record(fixed.iter().map(|s| s.to_string()).chain([
            "tail".into(),
            e.m.to_string(),
            opt(e.delta),
            e.value.to_string(),
            e.lower.to_string(),
            e.upper.to_string(),
            e.certified.to_string(),
        ]))?;
    }
    w.flush()?;
    Ok(())
}

/// One row per exact `n`, each repeating the Monte Carlo columns and the reconciled bracket.
pub fn write_kingman_csv<W: Write>(out: W, b: &KingmanBracket, orbits: usize, length: usize, seed: u64) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "mode", "n", "upper_bound", "mc_estimate", "mc_stderr", "mc_orbits", "mc_length", "seed", "value", "lower",
        "upper",
    ])?;
    for &(n, u) in &b.upper_bounds {
        w.write_record([
            b.mode.name().to_string(),
            n.to_string(),
            u.to_string(),
            b.mc_estimate.to_string(),
            b.mc_stderr.to_string(),
            orbits.to_string(),
            length.to_string(),
            seed.to_string(),
            b.value.to_string(),
            b.lower.to_string(),
            b.upper.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_dimension_csv<W: Write>(out: W, r: &DimensionReport, params: &str) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["quantity", "value", "lower", "upper", "params"])?;
    for e in &r.entries {
        w.write_record([
            e.which.name().to_string(),
            e.value.to_string(),
            e.bracket.lo.to_string(),
            e.bracket.hi.to_string(),
            params.to_string(),
        ])?;
    }
    for (eps, count) in &r.box_estimate.counts {
        w.write_record([
            format!("box_count@{eps}"),
            count.to_string(),
            count.to_string(),
            count.to_string(),
            params.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn system_round_trip() {
        let sys = SymbolicSystem::golden_mean(0.5).unwrap();
        let back = parse_system(&write_system(&sys)).unwrap();
        assert_eq!(back, sys);
    }

    #[test]
    fn short_row_is_reported_with_its_line() {
        let err = parse_system("2 0.5\n# comment\n1 1\n1\n").unwrap_err();
        assert!(err.to_string().contains("line 4"), "{err}");
    }

    #[test]
    fn scaled_potential() {
        let p = parse_potential("birkhoff 2 1\n0 1\n1 3\nscale -2\n").unwrap();
        assert_eq!(p.evaluate(&[0, 1], 2), -8.0);
    }
}
