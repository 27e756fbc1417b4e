//! Rendering of series and reports in the supported output formats.

use std::fmt::Write as _;

use clap::ValueEnum;
use gkz_mirror::mps::CoefficientFile;
use gkz_mirror::{CongruenceReport, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub fn series(s: &Series, format: Format) -> String {
    match format {
        Format::Json => {
            let file = CoefficientFile::from(s);
            serde_json::to_string_pretty(&file).expect("coefficient file serializes") + "\n"
        }
        Format::Csv => {
            let mut out = String::new();
            let names: Vec<String> = (1..=s.dim()).map(|i| format!("m{i}")).collect();
            writeln!(out, "{},num,den", names.join(",")).unwrap();
            for (m, c) in s.terms() {
                let exps: Vec<String> = m.exponents().iter().map(u32::to_string).collect();
                writeln!(out, "{},{},{}", exps.join(","), c.numer(), c.denom()).unwrap();
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            writeln!(out, "d = {}, D = {}, {} nonzero terms", s.dim(), s.degree(), s.len()).unwrap();
            for (m, c) in s.terms() {
                let mono: Vec<String> = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("z{}", i + 1) } else { format!("z{}^{e}", i + 1) })
                    .collect();
                let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
                writeln!(out, "{mono:<24} {c}").unwrap();
            }
            out
        }
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

pub fn report(r: &CongruenceReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
        Format::Csv => {
            let mut out = String::from("check,pass,cases,failures,witness,num,den,required,actual\n");
            let head = format!("{},{},{},{}", csv_field(&r.check), r.pass, r.cases, r.failures);
            if r.witnesses.is_empty() {
                writeln!(out, "{head},,,,,").unwrap();
            }
            for w in &r.witnesses {
                let params = serde_json::Value::Object(w.params.clone()).to_string();
                writeln!(
                    out,
                    "{head},{},{},{},{},{}",
                    csv_field(&params),
                    w.value.num,
                    w.value.den,
                    w.required_valuation,
                    w.actual_valuation
                )
                .unwrap();
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            let status = if r.pass { "PASS" } else { "FAIL" };
            writeln!(out, "{status}  {}  cases={} failures={}", r.check, r.cases, r.failures).unwrap();
            for (k, v) in &r.params {
                writeln!(out, "  {k} = {v}").unwrap();
            }
            for w in &r.witnesses {
                let params = serde_json::Value::Object(w.params.clone()).to_string();
                writeln!(
                    out,
                    "  witness {params}: value {}/{}, v_p required {} actual {}",
                    w.value.num, w.value.den, w.required_valuation, w.actual_valuation
                )
                .unwrap();
            }
            if (r.witnesses.len() as u64) < r.failures {
                writeln!(out, "  ({} more not shown)", r.failures - r.witnesses.len() as u64).unwrap();
            }
            out
        }
    }
}
