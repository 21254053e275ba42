//! Text format:
//!
//! ```text
//! n delta
//! v: u0/p0 u1/p1 ...
//! ```
//!
//! One line per node lists the far end `(neighbor/reverse port)` of each port
//! in order. Empty slots are written `-`.

use std::fmt;
use std::str::FromStr;

use super::{Port, PortedGraph};
use crate::error::Error;

impl fmt::Display for PortedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n(), self.delta())?;
        for v in 0..self.n() {
            write!(f, "{v}:")?;
            for slot in self.ports(v) {
                match slot {
                    Some(Port { node, rev }) => write!(f, " {node}/{rev}")?,
                    None => write!(f, " -")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for PortedGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hl, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let mut head = header.split_whitespace();
        let n: usize = head
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| err(hl, "expected `n delta`"))?;
        let delta: usize = head
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| err(hl, "expected `n delta`"))?;

        let mut g = PortedGraph::empty(n, delta);
        let mut seen = vec![false; n];
        for (ln, line) in lines {
            let (v, rest) = line.split_once(':').ok_or_else(|| err(ln, "missing `:`"))?;
            let v: usize = v.trim().parse().map_err(|_| err(ln, "bad node index"))?;
            if v >= n || seen[v] {
                return Err(err(ln, "node index out of range or repeated"));
            }
            seen[v] = true;
            let slots: Vec<&str> = rest.split_whitespace().collect();
            if slots.len() != delta {
                return Err(err(ln, "wrong number of port slots"));
            }
            for (p, tok) in slots.into_iter().enumerate() {
                if tok == "-" {
                    continue;
                }
                let (u, q) = tok.split_once('/').ok_or_else(|| err(ln, "expected u/p"))?;
                let node: usize = u.parse().map_err(|_| err(ln, "bad neighbor"))?;
                let rev: usize = q.parse().map_err(|_| err(ln, "bad reverse port"))?;
                if node >= n || rev >= delta {
                    return Err(err(ln, "port target out of range"));
                }
                g.ports[v][p] = Some(Port { node, rev });
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(err(0, &format!("node {missing} missing")));
        }
        g.check_ports()?;
        Ok(g)
    }
}
