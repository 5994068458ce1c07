//! Plain-text file formats.
//!
//! * Graph files: a `#nodes=<n>` header, then one `u<TAB>v<TAB>x` line per
//!   edge, where `x` is an inclusion probability (probabilistic graphs) or a
//!   trust weight (normalized graphs). Other `#` lines and blank lines are
//!   ignored.
//! * Clustering files: one `node_id<TAB>cluster_label` line per node.
//! * Distribution files: one `probability<TAB>l0,l1,...,l{n-1}` line per
//!   outcome. Probabilities are written as reduced fractions and may be read
//!   as fractions or decimals; both are parsed exactly.
//! * Symbol tables: one `node_id<TAB>name` line per node.

use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::distribution::ExplicitDistribution;
use crate::error::{Error, Result};
use crate::graph::{Clustering, Edge, ProbabilisticGraph};

/// A graph header plus `(u, v, value)` rows, before interpretation.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeTable {
    pub n: usize,
    pub rows: Vec<(u32, u32, f64)>,
}

fn fields(line: &str, lineno: usize, expected: usize) -> Result<Vec<&str>> {
    let parts: Vec<&str> = line.split('\t').collect();
    if parts.len() != expected {
        return Err(Error::parse(
            lineno,
            format!("expected {expected} tab-separated fields, found {}", parts.len()),
        ));
    }
    Ok(parts)
}

fn parse_num<T: std::str::FromStr>(s: &str, lineno: usize, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(lineno, format!("invalid {what} {s:?}")))
}

/// Reads a `#nodes=`-headed edge table.
pub fn read_edge_table<R: BufRead>(reader: R) -> Result<EdgeTable> {
    let mut n: Option<usize> = None;
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if let Some(rest) = line.strip_prefix("#nodes=") {
            if n.is_some() {
                return Err(Error::parse(lineno, "duplicate #nodes header"));
            }
            n = Some(parse_num(rest, lineno, "node count")?);
            continue;
        }
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(count) = n else {
            return Err(Error::parse(lineno, "edge before #nodes header"));
        };
        let f = fields(line, lineno, 3)?;
        let u: u32 = parse_num(f[0], lineno, "node id")?;
        let v: u32 = parse_num(f[1], lineno, "node id")?;
        let x: f64 = parse_num(f[2], lineno, "edge value")?;
        if u as usize >= count || v as usize >= count {
            return Err(Error::parse(lineno, format!("node id out of range for {count} nodes")));
        }
        if !x.is_finite() {
            return Err(Error::parse(lineno, format!("edge value {x} is not finite")));
        }
        rows.push((u, v, x));
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing #nodes header"))?;
    Ok(EdgeTable { n, rows })
}

pub fn write_edge_table<W: Write>(mut w: W, n: usize, rows: impl IntoIterator<Item = (u32, u32, f64)>) -> Result<()> {
    writeln!(w, "#nodes={n}")?;
    for (u, v, x) in rows {
        writeln!(w, "{u}\t{v}\t{x}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_graph<R: BufRead>(reader: R) -> Result<ProbabilisticGraph> {
    let t = read_edge_table(reader)?;
    let edges = t.rows.into_iter().map(|(u, v, p)| Edge::new(u, v, p)).collect();
    ProbabilisticGraph::new(t.n, edges)
}

pub fn write_graph<W: Write>(w: W, g: &ProbabilisticGraph) -> Result<()> {
    write_edge_table(w, g.node_count(), g.edges().iter().map(|e| (e.u.0, e.v.0, e.p)))
}

/// Reads `node_id<TAB>label` lines. Every id in `0..n` must appear exactly
/// once, where `n` is the number of lines. Labels are arbitrary tokens.
pub fn read_clustering<R: BufRead>(reader: R) -> Result<Clustering> {
    let mut entries: Vec<(u32, String, usize)> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let f = fields(line, lineno, 2)?;
        let id: u32 = parse_num(f[0], lineno, "node id")?;
        entries.push((id, f[1].trim().to_string(), lineno));
    }
    let n = entries.len();
    let mut labels: Vec<Option<&str>> = vec![None; n];
    for (id, label, lineno) in &entries {
        let slot = labels
            .get_mut(*id as usize)
            .ok_or_else(|| Error::parse(*lineno, format!("node id {id} out of range for {n} nodes")))?;
        if slot.is_some() {
            return Err(Error::parse(*lineno, format!("node {id} listed twice")));
        }
        *slot = Some(label);
    }
    let labels: Vec<&str> = labels.into_iter().map(|l| l.expect("all ids seen")).collect();
    Ok(Clustering::from_labels(&labels))
}

pub fn write_clustering<W: Write>(mut w: W, c: &Clustering) -> Result<()> {
    for (i, l) in c.labels().iter().enumerate() {
        writeln!(w, "{i}\t{l}")?;
    }
    w.flush()?;
    Ok(())
}

/// Parses `a/b`, an integer, or a decimal with optional exponent, exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        return Some(BigRational::new(a, b));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(all);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -value } else { value })
}

fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn read_distribution<R: BufRead>(reader: R) -> Result<ExplicitDistribution> {
    let mut outcomes = Vec::new();
    let mut n: Option<usize> = None;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let f = fields(line, lineno, 2)?;
        let p = parse_rational(f[0]).ok_or_else(|| Error::parse(lineno, format!("invalid probability {:?}", f[0])))?;
        let labels = f[1]
            .split(',')
            .map(|l| parse_num::<u64>(l, lineno, "label"))
            .collect::<Result<Vec<_>>>()?;
        match n {
            Some(k) if k != labels.len() => {
                return Err(Error::parse(
                    lineno,
                    format!("outcome has {} labels, expected {k}", labels.len()),
                ))
            }
            _ => n = Some(labels.len()),
        }
        outcomes.push((Clustering::from_labels(&labels), p));
    }
    ExplicitDistribution::new(outcomes)
}

pub fn write_distribution<W: Write>(mut w: W, d: &ExplicitDistribution) -> Result<()> {
    for (c, p) in d.outcomes() {
        let labels: Vec<String> = c.labels().iter().map(|l| l.to_string()).collect();
        writeln!(w, "{}\t{}", format_rational(p), labels.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_symbol_table<W: Write>(mut w: W, names: &[String]) -> Result<()> {
    for (i, name) in names.iter().enumerate() {
        writeln!(w, "{i}\t{name}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_symbol_table<R: BufRead>(reader: R) -> Result<Vec<String>> {
    let mut names = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let f = fields(&line, i + 1, 2)?;
        let id: usize = parse_num(f[0], i + 1, "node id")?;
        if id != names.len() {
            return Err(Error::parse(i + 1, format!("expected node id {}", names.len())));
        }
        names.push(f[1].to_string());
    }
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn graph_round_trip() {
        let text = "#nodes=4\n0\t1\t0.5\n# comment\n\n2\t3\t1\n";
        let g = read_graph(text.as_bytes()).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 2);
        let mut out = Vec::new();
        write_graph(&mut out, &g).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "#nodes=4\n0\t1\t0.5\n2\t3\t1\n");
    }

    #[test]
    fn graph_errors_carry_line_numbers() {
        let err = read_graph("#nodes=2\n0\t1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = read_graph("#nodes=2\n0\t5\t0.5\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = read_graph("0\t1\t0.5\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = read_graph("#nodes=2\n0\t1\tx\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(matches!(read_graph("".as_bytes()), Err(Error::Parse { .. })));
        assert!(matches!(
            read_graph("#nodes=2\n0\t1\t2.0\n".as_bytes()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn clustering_files() {
        let c = read_clustering("0\ta\n2\tb\n1\ta\n".as_bytes()).unwrap();
        assert_eq!(c.labels(), &[0, 0, 2]);
        let mut out = Vec::new();
        write_clustering(&mut out, &c).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "0\t0\n1\t0\n2\t2\n");
        assert!(read_clustering("0\ta\n0\tb\n".as_bytes()).is_err());
        assert!(read_clustering("0\ta\n3\tb\n".as_bytes()).is_err());
    }

    #[test]
    fn rationals() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(parse_rational("3/4"), Some(r(3, 4)));
        assert_eq!(parse_rational("0.75"), Some(r(3, 4)));
        assert_eq!(parse_rational("1"), Some(r(1, 1)));
        assert_eq!(parse_rational(".5"), Some(r(1, 2)));
        assert_eq!(parse_rational("2.5e-1"), Some(r(1, 4)));
        assert_eq!(parse_rational("1e2"), Some(r(100, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn distribution_file() {
        let text = "3/4\t0,1\n0.25\t5,5\n";
        let d = read_distribution(text.as_bytes()).unwrap();
        assert_eq!(d.len(), 2);
        let mut out = Vec::new();
        write_distribution(&mut out, &d).unwrap();
        let s = String::from_utf8(out).unwrap();
        assert_eq!(s, "1/4\t0,0\n3/4\t0,1\n");
        assert_eq!(read_distribution(s.as_bytes()).unwrap(), d);
        assert!(read_distribution("1/2\t0,1\n1/2\t0\n".as_bytes()).is_err());
        assert!(read_distribution("1/2\t0,1\n".as_bytes()).is_err());
    }

    #[test]
    fn symbol_table() {
        let names = vec!["alice".to_string(), "bob".to_string()];
        let mut out = Vec::new();
        write_symbol_table(&mut out, &names).unwrap();
        assert_eq!(read_symbol_table(out.as_slice()).unwrap(), names);
    }

    proptest! {
        #[test]
        fn clustering_text_round_trip(labels in proptest::collection::vec(0u8..5, 0..30)) {
            let c = Clustering::from_labels(&labels);
            let mut out = Vec::new();
            write_clustering(&mut out, &c).unwrap();
            prop_assert_eq!(read_clustering(out.as_slice()).unwrap(), c);
        }
    }
}
