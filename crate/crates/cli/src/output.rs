use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use lapoly::Field;
use serde_json::{json, Value};

use crate::error::CliResult;

pub fn open(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// 17 significant digits, enough to round-trip any f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_field_csv(w: &mut dyn Write, field: &Field) -> io::Result<()> {
    let grid = field.grid();
    write!(w, "index")?;
    for p in 1..=grid.dim() {
        write!(w, ",coord_{p}")?;
    }
    writeln!(w, ",value")?;
    for (flat, (j, v)) in grid.multi_indices().zip(field.values()).enumerate() {
        write!(w, "{}", flat + 1)?;
        for x in grid.coords(&j) {
            write!(w, ",{}", num(x))?;
        }
        writeln!(w, ",{}", num(*v))?;
    }
    Ok(())
}

pub fn field_json(field: &Field) -> Value {
    let grid = field.grid();
    let coords: Vec<Vec<f64>> = grid.multi_indices().map(|j| grid.coords(&j)).collect();
    json!({ "grid": grid, "coords": coords, "values": field.values() })
}
