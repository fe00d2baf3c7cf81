use std::io::{BufRead, Write};

use super::{Layout, SfdpError};

/// A layout read back from text, with its node labels and seed.
#[derive(Clone, Debug, PartialEq)]
pub struct LayoutFile {
    pub layout: Layout,
    pub labels: Vec<String>,
    pub seed: u64,
}

/// Writes `# dim=<d> seed=<s>` followed by one `label x1 .. xd` line per
/// node. Coordinates carry 17 significant digits so they round-trip.
pub fn write_layout<W: Write>(layout: &Layout, labels: &[String], seed: u64, mut out: W) -> Result<(), SfdpError> {
    if labels.len() != layout.len() {
        return Err(SfdpError::SizeMismatch { expected: layout.len(), found: labels.len() });
    }
    writeln!(out, "# dim={} seed={}", layout.dim(), seed)?;
    for (label, pos) in labels.iter().zip(layout.points()) {
        write!(out, "{label}")?;
        for x in pos {
            write!(out, " {x:.16e}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn read_layout<R: BufRead>(reader: R) -> Result<LayoutFile, SfdpError> {
    let mut lines = reader.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    let bad_header =
        || SfdpError::Format { line: 1, message: format!("expected '# dim=<d> seed=<s>', found '{header}'") };
    let mut dim = None;
    let mut seed = None;
    let body = header.strip_prefix('#').ok_or_else(bad_header)?;
    for token in body.split_whitespace() {
        if let Some(v) = token.strip_prefix("dim=") {
            dim = v.parse::<usize>().ok();
        } else if let Some(v) = token.strip_prefix("seed=") {
            seed = v.parse::<u64>().ok();
        }
    }
    let (dim, seed) = match (dim, seed) {
        (Some(d), Some(s)) if d > 0 => (d, s),
        _ => return Err(bad_header()),
    };

    let mut labels = Vec::new();
    let mut coords = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        labels.push(tokens.next().unwrap().to_owned());
        let before = coords.len();
        for t in tokens {
            let x: f64 =
                t.parse().map_err(|_| SfdpError::Format { line: lineno, message: format!("bad coordinate '{t}'") })?;
            coords.push(x);
        }
        let found = coords.len() - before;
        if found != dim {
            return Err(SfdpError::Format {
                line: lineno,
                message: format!("expected {dim} coordinates, found {found}"),
            });
        }
    }
    let layout = Layout::from_coords(dim, coords)?;
    Ok(LayoutFile { layout, labels, seed })
}
