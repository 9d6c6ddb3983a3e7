//! CSV output and number formatting.

/// Scientific notation with three significant digits, computed from the
/// natural log of a positive value so scores far below the f64 range still
/// print (`5.00E-05`, `3.10E-174`).
pub fn sci3_from_ln(ln: f64) -> String {
    if ln == f64::NEG_INFINITY {
        return "0.00E+00".into();
    }
    let log10 = ln / std::f64::consts::LN_10;
    let mut exp = log10.floor();
    let mut mant = (100.0 * 10f64.powf(log10 - exp)).round() / 100.0;
    if mant >= 10.0 {
        mant /= 10.0;
        exp += 1.0;
    }
    let exp = exp as i64;
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mant:.2}E{sign}{:02}", exp.abs())
}

pub fn sci3(value: f64) -> String {
    if value == 0.0 {
        return "0.00E+00".into();
    }
    let s = sci3_from_ln(value.abs().ln());
    if value < 0.0 {
        format!("-{s}")
    } else {
        s
    }
}

pub fn fixed(value: f64, decimals: usize) -> String {
    // avoid printing "-0.0" for values that round to zero
    let s = format!("{value:.decimals$}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_owned()
    } else {
        s
    }
}

/// Mean and sample standard deviation (0 for a single run).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub runs: usize,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n > 0, "summary of no runs");
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        Self { mean, std, runs: n }
    }
}

/// An in-memory CSV table.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Self { writer }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("in-memory write");
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.writer.into_inner().expect("in-memory flush")
    }
}
