//! Text format shared by training sets and reduced bases.
//!
//! ```text
//! # emprint-training v1, L=<int>, t_start=<float>, t_end=<float>, d=<int>[, key=value ...]
//! p_1,...,p_d,re:im,re:im,...        (one line per waveform, L pairs)
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{CatalogError, TimeGrid, TrainingSet};
use crate::numerics::{ComplexMatrix, C64};

const MAGIC: &str = "# emprint-training v1";

/// Parsed header line.
#[derive(Clone, Debug, PartialEq)]
pub struct Header {
    pub grid: TimeGrid,
    pub param_dim: usize,
    /// Trailing `key=value` fields beyond the required ones, in file order.
    pub extra: Vec<(String, String)>,
}

impl Header {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.extra.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn render(&self) -> String {
        let mut s = format!(
            "{MAGIC}, L={}, t_start={}, t_end={}, d={}",
            self.grid.len(),
            self.grid.t_start(),
            self.grid.t_end(),
            self.param_dim
        );
        for (k, v) in &self.extra {
            s.push_str(&format!(", {k}={v}"));
        }
        s
    }

    fn parse(line: &str) -> Result<Self, CatalogError> {
        let err = |message: String| CatalogError::Parse { line: 1, message };
        let rest = line
            .strip_prefix(MAGIC)
            .ok_or_else(|| err(format!("header must start with '{MAGIC}'")))?;
        let mut l = None;
        let mut t_start = None;
        let mut t_end = None;
        let mut d = None;
        let mut extra = Vec::new();
        for field in rest.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got '{field}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| err(format!("invalid {what} '{value}'"));
            match key {
                "L" => l = Some(value.parse::<usize>().map_err(|_| bad("L"))?),
                "t_start" => t_start = Some(value.parse::<f64>().map_err(|_| bad("t_start"))?),
                "t_end" => t_end = Some(value.parse::<f64>().map_err(|_| bad("t_end"))?),
                "d" => d = Some(value.parse::<usize>().map_err(|_| bad("d"))?),
                _ => extra.push((key.to_string(), value.to_string())),
            }
        }
        let missing = |k: &str| err(format!("header is missing '{k}'"));
        let grid = TimeGrid::new(
            t_start.ok_or_else(|| missing("t_start"))?,
            t_end.ok_or_else(|| missing("t_end"))?,
            l.ok_or_else(|| missing("L"))?,
        )
        .map_err(|e| err(e.to_string()))?;
        Ok(Self {
            grid,
            param_dim: d.ok_or_else(|| missing("d"))?,
            extra,
        })
    }
}

/// Header plus rows, before any domain validation.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveformTable {
    pub header: Header,
    pub params: Vec<Vec<f64>>,
    pub rows: Vec<Vec<C64>>,
}

pub fn write_table<W: Write>(
    out: &mut W,
    header: &Header,
    params: &[Vec<f64>],
    rows: impl IntoIterator<Item = impl AsRef<[C64]>>,
) -> std::io::Result<()> {
    writeln!(out, "{}", header.render())?;
    let mut line = String::new();
    for (k, row) in rows.into_iter().enumerate() {
        line.clear();
        let mut first = true;
        let mut sep = |line: &mut String| {
            if !first {
                line.push(',');
            }
            first = false;
        };
        if header.param_dim > 0 {
            for p in &params[k] {
                sep(&mut line);
                line.push_str(&format!("{p:e}"));
            }
        }
        for z in row.as_ref() {
            sep(&mut line);
            line.push_str(&format!("{:e}:{:e}", z.re, z.im));
        }
        writeln!(out, "{line}")?;
    }
    out.flush()
}

pub fn read_table<R: BufRead>(input: R) -> Result<WaveformTable, CatalogError> {
    let mut lines = input.lines();
    let header_line = lines
        .next()
        .ok_or(CatalogError::Parse {
            line: 1,
            message: "file is empty".into(),
        })?
        .map_err(|e| CatalogError::Io(e.to_string()))?;
    let header = Header::parse(header_line.trim_end_matches('\r'))?;
    let l = header.grid.len();
    let d = header.param_dim;

    let mut params = Vec::new();
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let line = line.map_err(|e| CatalogError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != d + l {
            return Err(CatalogError::GridMismatch(format!(
                "line {line_no}: expected {d} parameter(s) and {l} samples ({} fields), found {}",
                d + l,
                fields.len()
            )));
        }
        let row_index = rows.len();
        let p = fields[..d]
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|_| CatalogError::Parse {
                    line: line_no,
                    message: format!("invalid parameter '{f}'"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut row = Vec::with_capacity(l);
        for (col, f) in fields[d..].iter().enumerate() {
            let (re, im) = f.split_once(':').ok_or_else(|| CatalogError::Parse {
                line: line_no,
                message: format!("sample {col}: expected re:im, got '{f}'"),
            })?;
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|_| CatalogError::Parse {
                    line: line_no,
                    message: format!("sample {col}: invalid number '{s}'"),
                })
            };
            let z = C64::new(parse(re)?, parse(im)?);
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(CatalogError::NonFiniteSample {
                    line: line_no,
                    row: row_index,
                    column: col,
                });
            }
            row.push(z);
        }
        params.push(p);
        rows.push(row);
    }
    Ok(WaveformTable {
        header,
        params,
        rows,
    })
}

pub fn write_training<W: Write>(ts: &TrainingSet, out: &mut W) -> std::io::Result<()> {
    let header = Header {
        grid: *ts.grid(),
        param_dim: ts.param_dim(),
        extra: Vec::new(),
    };
    write_table(out, &header, ts.params(), ts.rows())
}

pub fn read_training<R: BufRead>(input: R) -> Result<TrainingSet, CatalogError> {
    let table = read_table(input)?;
    if table.header.param_dim == 0 {
        return Err(CatalogError::Parse {
            line: 1,
            message: "training files need d >= 1".into(),
        });
    }
    if let Some(kind) = table.header.get("kind") {
        return Err(CatalogError::Parse {
            line: 1,
            message: format!("expected a training file, found kind={kind}"),
        });
    }
    if table.rows.is_empty() {
        return Err(CatalogError::EmptyTraining);
    }
    let samples = ComplexMatrix::from_rows(&table.rows)
        .map_err(|e| CatalogError::GridMismatch(e.to_string()))?;
    TrainingSet::new(table.header.grid, table.params, samples)
}

pub fn save_training_csv(ts: &TrainingSet, path: impl AsRef<Path>) -> Result<(), CatalogError> {
    let file = File::create(path.as_ref()).map_err(|e| CatalogError::Io(e.to_string()))?;
    let mut w = BufWriter::new(file);
    write_training(ts, &mut w).map_err(|e| CatalogError::Io(e.to_string()))
}

pub fn load_training_csv(path: impl AsRef<Path>) -> Result<TrainingSet, CatalogError> {
    let path = path.as_ref();
    let file = File::open(path)
        .map_err(|e| CatalogError::Io(format!("{}: {e}", path.display())))?;
    read_training(BufReader::new(file))
}
