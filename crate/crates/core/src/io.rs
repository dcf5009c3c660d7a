//! On-disk formats: point sets (text or binary), query streams, recorded
//! workloads and benchmark result rows.
//!
//! Text point files start with `# omega=<ω> d=<d>` followed by one
//! comma-separated point per line. Binary point files are
//!
//! ```text
//! magic   8 bytes  b"SFCPTS\0\x01"
//! omega   u32 LE
//! d       u32 LE
//! count   u64 LE
//! coords  count * d * u32 LE, axis order
//! ```
//!
//! Query files hold `qx,qy,r` lines, optionally after the same header line.
//! Readers reject out-of-domain values; with `one_based` every coordinate is
//! shifted down by one first.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};

pub const BINARY_MAGIC: [u8; 8] = *b"SFCPTS\0\x01";
pub const WORKLOAD_VERSION: u32 = 1;
pub const RESULTS_HEADER: [&str; 11] = [
    "structure", "dataset", "n", "curve", "rho", "metric", "phase", "ms", "queries", "run", "is_median",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PointFormat {
    #[default]
    Text,
    Binary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ReadOptions {
    /// Input uses `[1, 2^ω]` coordinates.
    pub one_based: bool,
}

fn header_line(omega: u32, dims: usize) -> String {
    format!("# omega={omega} d={dims}")
}

/// Parses `key=value` pairs from a `#` header line.
fn header_fields(line: &str) -> Option<Vec<(&str, &str)>> {
    let body = line.strip_prefix('#')?;
    Some(body.split_whitespace().filter_map(|t| t.split_once('=')).collect())
}

fn header_u64(fields: &[(&str, &str)], key: &str, line: usize) -> Result<u64> {
    let (_, v) = fields
        .iter()
        .find(|(k, _)| *k == key)
        .ok_or_else(|| Error::parse(line, format!("header is missing `{key}=`")))?;
    v.parse()
        .map_err(|_| Error::parse(line, format!("header field `{key}` is not an integer: `{v}`")))
}

fn parse_domain<const D: usize>(fields: &[(&str, &str)], line: usize) -> Result<Domain<D>> {
    let omega = header_u64(fields, "omega", line)?;
    let dims = header_u64(fields, "d", line)?;
    if dims != D as u64 {
        return Err(Error::parse(line, format!("expected d={D}, file declares d={dims}")));
    }
    let omega = u32::try_from(omega).map_err(|_| Error::parse(line, "omega out of range"))?;
    Domain::new(omega)
}

struct Fields<'a> {
    line: usize,
    parts: std::str::Split<'a, char>,
}

impl<'a> Fields<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Self {
            line,
            parts: text.split(','),
        }
    }

    fn next_u64(&mut self, what: &str) -> Result<u64> {
        let raw = self
            .parts
            .next()
            .ok_or_else(|| Error::parse(self.line, format!("missing {what}")))?
            .trim();
        raw.parse::<u64>()
            .map_err(|_| Error::parse(self.line, format!("invalid {what} `{raw}`")))
    }

    fn coord(&mut self, extent: u64, opts: ReadOptions) -> Result<u32> {
        let raw = self.next_u64("coordinate")?;
        shift_coord(raw, extent, opts).ok_or(Error::LineDomainViolation {
            line: self.line,
            value: raw,
            extent,
        })
    }

    fn point<const D: usize>(&mut self, extent: u64, opts: ReadOptions) -> Result<Point<D>> {
        let mut out = [0u32; D];
        for c in &mut out {
            *c = self.coord(extent, opts)?;
        }
        Ok(Point(out))
    }

    fn finish(mut self) -> Result<()> {
        match self.parts.next() {
            None => Ok(()),
            Some(extra) => Err(Error::parse(self.line, format!("unexpected trailing field `{}`", extra.trim()))),
        }
    }
}

fn shift_coord(raw: u64, extent: u64, opts: ReadOptions) -> Option<u32> {
    let v = if opts.one_based { raw.checked_sub(1)? } else { raw };
    (v < extent).then_some(v as u32)
}

/// Non-empty, non-comment lines with 1-based line numbers.
fn data_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l)).map_err(Error::from))
        .filter(|r| match r {
            Ok((_, l)) => {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            }
            Err(_) => true,
        })
}

fn first_line<R: BufRead>(reader: &mut R) -> Result<String> {
    let mut line = String::new();
    reader.read_line(&mut line)?;
    Ok(line.trim_end().to_string())
}

pub fn parse_points_text<const D: usize, R: BufRead>(mut reader: R, opts: ReadOptions) -> Result<(Domain<D>, Vec<Point<D>>)> {
    let header = first_line(&mut reader)?;
    let fields = header_fields(&header).ok_or_else(|| Error::parse(1, "expected `# omega=<ω> d=<d>` header"))?;
    let domain = parse_domain::<D>(&fields, 1)?;
    let extent = domain.extent();
    let mut points = Vec::new();
    for item in data_lines(reader) {
        let (line, text) = item?;
        let line = line + 1;
        let mut f = Fields::new(&text, line);
        points.push(f.point::<D>(extent, opts)?);
        f.finish()?;
    }
    Ok((domain, points))
}

pub fn parse_points_binary<const D: usize, R: Read>(mut reader: R, opts: ReadOptions) -> Result<(Domain<D>, Vec<Point<D>>)> {
    let mut head = [0u8; 24];
    reader.read_exact(&mut head)?;
    if head[..8] != BINARY_MAGIC {
        return Err(Error::parse(0, "bad binary point file magic"));
    }
    let omega = u32::from_le_bytes(head[8..12].try_into().unwrap());
    let dims = u32::from_le_bytes(head[12..16].try_into().unwrap());
    let count = u64::from_le_bytes(head[16..24].try_into().unwrap());
    if dims as usize != D {
        return Err(Error::parse(0, format!("expected d={D}, file declares d={dims}")));
    }
    let domain = Domain::<D>::new(omega)?;
    let extent = domain.extent();
    let mut points = Vec::with_capacity(count.min(1 << 24) as usize);
    let mut buf = [0u8; 4];
    for index in 0..count as usize {
        let mut out = [0u32; D];
        for (axis, c) in out.iter_mut().enumerate() {
            reader.read_exact(&mut buf)?;
            let raw = u32::from_le_bytes(buf) as u64;
            *c = shift_coord(raw, extent, opts).ok_or(Error::DomainViolation {
                index,
                axis,
                value: raw,
                extent,
            })?;
        }
        points.push(Point(out));
    }
    Ok((domain, points))
}

/// Reads a point file, detecting the binary format by its magic.
pub fn read_points<const D: usize>(path: impl AsRef<Path>, opts: ReadOptions) -> Result<(Domain<D>, Vec<Point<D>>)> {
    let mut reader = BufReader::new(File::open(path)?);
    let is_binary = reader.fill_buf()?.starts_with(&BINARY_MAGIC);
    if is_binary {
        parse_points_binary(reader, opts)
    } else {
        parse_points_text(reader, opts)
    }
}

pub fn write_points<const D: usize>(
    path: impl AsRef<Path>,
    domain: &Domain<D>,
    points: &[Point<D>],
    format: PointFormat,
) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        domain.check_point(i, p)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    match format {
        PointFormat::Text => {
            writeln!(w, "{}", header_line(domain.omega(), D))?;
            for p in points {
                write_csv_row(&mut w, &p.0, None)?;
            }
        }
        PointFormat::Binary => {
            w.write_all(&BINARY_MAGIC)?;
            w.write_all(&domain.omega().to_le_bytes())?;
            w.write_all(&(D as u32).to_le_bytes())?;
            w.write_all(&(points.len() as u64).to_le_bytes())?;
            for p in points {
                for c in p.0 {
                    w.write_all(&c.to_le_bytes())?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn write_csv_row<W: Write>(w: &mut W, coords: &[u32], radius: Option<u64>) -> std::io::Result<()> {
    for (i, c) in coords.iter().enumerate() {
        if i > 0 {
            w.write_all(b",")?;
        }
        write!(w, "{c}")?;
    }
    if let Some(r) = radius {
        write!(w, ",{r}")?;
    }
    writeln!(w)
}

/// Parses `qx,qy,r` lines. A leading header, if present, must declare `domain`.
pub fn parse_queries<const D: usize, R: BufRead>(
    reader: R,
    domain: &Domain<D>,
    opts: ReadOptions,
) -> Result<Vec<(Point<D>, u64)>> {
    let extent = domain.extent();
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(fields) = header_fields(text) {
            if fields.iter().any(|(k, _)| *k == "omega") {
                let declared = parse_domain::<D>(&fields, line_no)?;
                if declared != *domain {
                    return Err(Error::parse(
                        line_no,
                        format!("query file declares omega={}, expected {}", declared.omega(), domain.omega()),
                    ));
                }
            }
            continue;
        }
        let mut f = Fields::new(text, line_no);
        let centre = f.point::<D>(extent, opts)?;
        let r = f.next_u64("radius")?;
        f.finish()?;
        out.push((centre, r));
    }
    Ok(out)
}

pub fn read_queries<const D: usize>(
    path: impl AsRef<Path>,
    domain: &Domain<D>,
    opts: ReadOptions,
) -> Result<Vec<(Point<D>, u64)>> {
    parse_queries(BufReader::new(File::open(path)?), domain, opts)
}

pub fn write_queries<const D: usize>(path: impl AsRef<Path>, domain: &Domain<D>, queries: &[(Point<D>, u64)]) -> Result<()> {
    for (i, (q, _)) in queries.iter().enumerate() {
        domain.check_point(i, q)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", header_line(domain.omega(), D))?;
    for (q, r) in queries {
        write_csv_row(&mut w, &q.0, Some(*r))?;
    }
    w.flush()?;
    Ok(())
}

/// A fixed point set plus the query log run against it.
#[derive(Clone, Debug, PartialEq)]
pub struct Workload<const D: usize> {
    pub domain: Domain<D>,
    pub points: Vec<Point<D>>,
    pub queries: Vec<(Point<D>, u64)>,
}

/// Text layout: `# sfc-workload version=1 omega=<ω> d=<d> points=<n> queries=<m>`,
/// then `n` point lines, then `m` query lines.
pub fn write_workload<const D: usize>(path: impl AsRef<Path>, workload: &Workload<D>) -> Result<()> {
    let dom = &workload.domain;
    for (i, p) in workload.points.iter().enumerate() {
        dom.check_point(i, p)?;
    }
    for (i, (q, _)) in workload.queries.iter().enumerate() {
        dom.check_point(i, q)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(
        w,
        "# sfc-workload version={WORKLOAD_VERSION} omega={} d={D} points={} queries={}",
        dom.omega(),
        workload.points.len(),
        workload.queries.len()
    )?;
    for p in &workload.points {
        write_csv_row(&mut w, &p.0, None)?;
    }
    for (q, r) in &workload.queries {
        write_csv_row(&mut w, &q.0, Some(*r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn parse_workload<const D: usize, R: BufRead>(mut reader: R, opts: ReadOptions) -> Result<Workload<D>> {
    let header = first_line(&mut reader)?;
    let fields = header_fields(&header)
        .filter(|f| header.contains("sfc-workload") && !f.is_empty())
        .ok_or_else(|| Error::parse(1, "expected `# sfc-workload ...` header"))?;
    let version = header_u64(&fields, "version", 1)?;
    if version != WORKLOAD_VERSION as u64 {
        return Err(Error::parse(1, format!("unsupported workload version {version}")));
    }
    let domain = parse_domain::<D>(&fields, 1)?;
    let n_points = header_u64(&fields, "points", 1)? as usize;
    let n_queries = header_u64(&fields, "queries", 1)? as usize;
    let extent = domain.extent();
    let mut points = Vec::with_capacity(n_points.min(1 << 24));
    let mut queries = Vec::with_capacity(n_queries.min(1 << 24));
    let mut last_line = 1;
    for item in data_lines(reader) {
        let (line, text) = item?;
        let line = line + 1;
        last_line = line;
        let mut f = Fields::new(&text, line);
        if points.len() < n_points {
            points.push(f.point::<D>(extent, opts)?);
        } else if queries.len() < n_queries {
            let q = f.point::<D>(extent, opts)?;
            queries.push((q, f.next_u64("radius")?));
        } else {
            return Err(Error::parse(line, "more records than the header declares"));
        }
        f.finish()?;
    }
    if points.len() != n_points || queries.len() != n_queries {
        return Err(Error::parse(
            last_line,
            format!(
                "header declares {n_points} points and {n_queries} queries, found {} and {}",
                points.len(),
                queries.len()
            ),
        ));
    }
    Ok(Workload { domain, points, queries })
}

pub fn read_workload<const D: usize>(path: impl AsRef<Path>, opts: ReadOptions) -> Result<Workload<D>> {
    parse_workload(BufReader::new(File::open(path)?), opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Build,
    Insert,
    Query,
    /// Build plus one pass over a recorded query log.
    Total,
}

/// One benchmark measurement.
///
/// `ms` is total elapsed milliseconds for `build`, `insert` and `total`
/// rows, and milliseconds per query for `query` rows. Per-run rows number
/// runs from 1; median rows have `run = 0` and `is_median = true`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub structure: String,
    pub dataset: String,
    pub n: usize,
    pub curve: String,
    pub rho: f64,
    pub metric: String,
    pub phase: Phase,
    pub ms: f64,
    pub queries: u64,
    pub run: u32,
    pub is_median: bool,
}

/// Appends `records` to the CSV at `path`, writing the header first when the
/// file is new or empty.
pub fn write_results(path: impl AsRef<Path>, records: &[ResultRecord]) -> Result<()> {
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let fresh = file.metadata()?.len() == 0;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if fresh {
        w.write_record(RESULTS_HEADER)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<ResultRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != RESULTS_HEADER {
        return Err(Error::parse(1, format!("unexpected results header {header:?}")));
    }
    r.deserialize().map(|rec| rec.map_err(Error::from)).collect()
}
