use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use kleinian::curves::AffinePoint;
use kleinian::periods::CMat2;
use kleinian::{pair, C64};
use serde::Serialize;

pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<(), crate::Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

pub type Pair = [f64; 2];

pub fn mat(m: &CMat2) -> [[Pair; 2]; 2] {
    [[pair(m[(0, 0)]), pair(m[(0, 1)])], [pair(m[(1, 0)]), pair(m[(1, 1)])]]
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Point {
    Finite { x: Pair, y: Pair },
    Infinity(&'static str),
}

pub fn point(p: &AffinePoint) -> Point {
    match *p {
        AffinePoint::Finite { x, y } => Point::Finite { x: pair(x), y: pair(y) },
        AffinePoint::Infinity => Point::Infinity("infinity"),
    }
}

/// `name_re`, `name_im`.
pub fn complex_header(names: &[&str]) -> Vec<String> {
    names
        .iter()
        .flat_map(|n| [format!("{n}_re"), format!("{n}_im")])
        .collect()
}

pub fn complex_fields(values: &[C64]) -> Vec<String> {
    values
        .iter()
        .flat_map(|z| [format!("{:?}", z.re), format!("{:?}", z.im)])
        .collect()
}
