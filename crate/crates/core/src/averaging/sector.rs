//! Angular sectors at the origin with exact integer sign tests.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SectorError {
    #[error("zero direction vector")]
    ZeroDirection,
    #[error("bad sector syntax: {0}")]
    Parse(String),
}

/// Half-open counterclockwise arc [from, to) between two rays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub from: (i64, i64),
    pub to: (i64, i64),
}

/// A sampling sector: the full punctured plane, one open quadrant, or a
/// finite union of half-open arcs. Membership is scale-invariant and
/// computed from cross/dot signs only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Sector {
    Full,
    /// Open quadrant by sign of x and y (true = positive).
    Quadrant(bool, bool),
    Arcs(Vec<Arc>),
}

fn cross(u: (i64, i64), v: (i64, i64)) -> i128 {
    u.0 as i128 * v.1 as i128 - u.1 as i128 * v.0 as i128
}

fn dot(u: (i64, i64), v: (i64, i64)) -> i128 {
    u.0 as i128 * v.0 as i128 + u.1 as i128 * v.1 as i128
}

fn on_ray(u: (i64, i64), p: (i64, i64)) -> bool {
    cross(u, p) == 0 && dot(u, p) > 0
}

/// p in the ccw half-open arc [u, v).
fn in_arc(u: (i64, i64), v: (i64, i64), p: (i64, i64)) -> bool {
    let cuv = cross(u, v);
    if cuv == 0 {
        return if dot(u, v) > 0 {
            // zero-width arc
            false
        } else {
            // half plane: strictly left of u, plus the ray u itself
            cross(u, p) > 0 || on_ray(u, p)
        };
    }
    if cuv > 0 {
        // arc shorter than pi
        on_ray(u, p) || (cross(u, p) > 0 && cross(p, v) > 0)
    } else {
        // arc longer than pi: complement of [v, u)
        !in_arc(v, u, p)
    }
}

impl Sector {
    pub fn arc(from: (i64, i64), to: (i64, i64)) -> Result<Self, SectorError> {
        if from == (0, 0) || to == (0, 0) {
            return Err(SectorError::ZeroDirection);
        }
        Ok(Sector::Arcs(vec![Arc { from, to }]))
    }

    pub fn quadrant(spec: &str) -> Result<Self, SectorError> {
        match spec {
            "++" => Ok(Sector::Quadrant(true, true)),
            "+-" => Ok(Sector::Quadrant(true, false)),
            "-+" => Ok(Sector::Quadrant(false, true)),
            "--" => Ok(Sector::Quadrant(false, false)),
            other => Err(SectorError::Parse(format!("bad quadrant '{other}'"))),
        }
    }

    /// `x0,y0:x1,y1` for a ccw arc, `full`, or a quadrant spec.
    pub fn parse(s: &str) -> Result<Self, SectorError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("full") {
            return Ok(Sector::Full);
        }
        if matches!(s, "++" | "+-" | "-+" | "--") {
            return Sector::quadrant(s);
        }
        let (from, to) = s
            .split_once(':')
            .ok_or_else(|| SectorError::Parse("expected 'x0,y0:x1,y1'".into()))?;
        let pair = |t: &str| -> Result<(i64, i64), SectorError> {
            let (a, b) = t
                .split_once(',')
                .ok_or_else(|| SectorError::Parse(format!("bad pair '{t}'")))?;
            Ok((
                a.trim()
                    .parse()
                    .map_err(|_| SectorError::Parse(format!("bad integer '{a}'")))?,
                b.trim()
                    .parse()
                    .map_err(|_| SectorError::Parse(format!("bad integer '{b}'")))?,
            ))
        };
        Sector::arc(pair(from)?, pair(to)?)
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        if (x, y) == (0, 0) {
            return false;
        }
        match self {
            Sector::Full => true,
            Sector::Quadrant(px, py) => {
                (if *px { x > 0 } else { x < 0 }) && (if *py { y > 0 } else { y < 0 })
            }
            Sector::Arcs(arcs) => arcs.iter().any(|a| in_arc(a.from, a.to, (x, y))),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Sector::Full => "full".into(),
            Sector::Quadrant(px, py) => format!(
                "quadrant {}{}",
                if *px { '+' } else { '-' },
                if *py { '+' } else { '-' }
            ),
            Sector::Arcs(arcs) => arcs
                .iter()
                .map(|a| {
                    format!(
                        "[{},{}:{},{})",
                        a.from.0, a.from.1, a.to.0, a.to.1
                    )
                })
                .collect::<Vec<_>>()
                .join(" u "),
        }
    }
}
