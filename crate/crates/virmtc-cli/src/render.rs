use clap::ValueEnum;
use serde::Serialize;
use virmtc::modular_data::round_sig;
use virmtc::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

/// Float with 12 significant digits, shortest form.
pub fn f12(x: f64) -> String {
    let r = round_sig(x, 12);
    if r == 0.0 {
        "0".into()
    } else {
        r.to_string()
    }
}

pub fn json<T: Serialize + ?Sized>(v: &T) -> Result<String, Error> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Invariant(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Invariant(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invariant(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
}

pub fn md_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = format!("| {} |\n", header.join(" | "));
    s += &format!("|{}\n", "---|".repeat(header.len()));
    for r in rows {
        s += &format!("| {} |\n", r.join(" | "));
    }
    s
}

pub fn join<T: ToString>(xs: impl IntoIterator<Item = T>, sep: &str) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}
