//! Result records and their CSV and JSON forms.

use std::io::Write;

use serde::{Deserialize, Serialize};

/// Fixed leading CSV columns; per-user rates follow as `rate_1..rate_K`.
pub const CSV_COLUMNS: [&str; 11] = [
    "scheme",
    "solver",
    "M",
    "p_max_dbm",
    "realization",
    "wsr_bps_hz",
    "s_x",
    "s_y",
    "s_z",
    "iters",
    "wall_ms",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub scheme: String,
    pub solver: String,
    #[serde(rename = "M")]
    pub m: usize,
    pub p_max_dbm: f64,
    pub realization: usize,
    pub wsr: f64,
    pub rates: Vec<f64>,
    pub s: [f64; 3],
    pub iterations: usize,
    pub wall_ms: f64,
    /// Transmit power per user in watts.
    pub power: Vec<f64>,
    /// Decoding order from weakest to strongest user.
    pub order: Vec<usize>,
    /// Reflection coefficients as `[re, im]`, one vector per slot for TDMA.
    /// Empty when the value comes from the relaxed bound.
    pub reflections: Vec<Vec<[f64; 2]>>,
    pub converged: bool,
    /// Outer-approximation bound, when computed.
    pub upper_bound: Option<f64>,
}

/// Rounds to nine significant digits.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

/// `printf("%.9g")`.
pub fn fmt_g9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.8e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mant.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

impl ResultRecord {
    /// Copy with every float rounded as it is written out.
    pub fn rounded(&self) -> Self {
        let r = |v: &[f64]| v.iter().map(|x| round9(*x)).collect::<Vec<_>>();
        Self {
            p_max_dbm: round9(self.p_max_dbm),
            wsr: round9(self.wsr),
            rates: r(&self.rates),
            s: self.s.map(round9),
            wall_ms: round9(self.wall_ms),
            power: r(&self.power),
            reflections: self
                .reflections
                .iter()
                .map(|v| v.iter().map(|z| z.map(round9)).collect())
                .collect(),
            upper_bound: self.upper_bound.map(round9),
            ..self.clone()
        }
    }
}

pub fn csv_header(k: usize) -> Vec<String> {
    CSV_COLUMNS
        .iter()
        .map(|c| c.to_string())
        .chain((1..=k).map(|i| format!("rate_{i}")))
        .collect()
}

/// Writes `records` with `k` rate columns.
pub fn write_csv<W: Write>(records: &[ResultRecord], k: usize, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(k))?;
    for r in records {
        let mut row = vec![
            r.scheme.clone(),
            r.solver.clone(),
            r.m.to_string(),
            fmt_g9(r.p_max_dbm),
            r.realization.to_string(),
            fmt_g9(r.wsr),
            fmt_g9(r.s[0]),
            fmt_g9(r.s[1]),
            fmt_g9(r.s[2]),
            r.iterations.to_string(),
            fmt_g9(r.wall_ms),
        ];
        row.extend((0..k).map(|i| r.rates.get(i).map_or_else(String::new, |x| fmt_g9(*x))));
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[ResultRecord], mut out: W) -> serde_json::Result<()> {
    let rounded: Vec<ResultRecord> = records.iter().map(ResultRecord::rounded).collect();
    serde_json::to_writer_pretty(&mut out, &rounded)?;
    writeln!(out).map_err(serde_json::Error::io)
}

pub fn read_json(text: &str) -> serde_json::Result<Vec<ResultRecord>> {
    serde_json::from_str(text)
}
