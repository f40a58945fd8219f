//! Finite-index lattice cosets of Z^2 with exact membership.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("basis is singular")]
    SingularBasis,
    #[error("bad lattice syntax: {0}")]
    Parse(String),
}

/// Coset of a finite-index sublattice of Z^2. The basis is kept in
/// Hermite normal form, rows (a, 0) and (b, c) with a, c > 0 and
/// 0 <= b < a; the offset is reduced modulo the lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeCoset {
    a: i64,
    b: i64,
    c: i64,
    offset: (i64, i64),
}

impl LatticeCoset {
    /// All of Z^2.
    pub fn full() -> Self {
        LatticeCoset {
            a: 1,
            b: 0,
            c: 1,
            offset: (0, 0),
        }
    }

    /// From two arbitrary basis vectors and an offset.
    pub fn from_basis(
        v1: (i64, i64),
        v2: (i64, i64),
        offset: (i64, i64),
    ) -> Result<Self, LatticeError> {
        let det = v1.0 as i128 * v2.1 as i128 - v1.1 as i128 * v2.0 as i128;
        if det == 0 {
            return Err(LatticeError::SingularBasis);
        }
        // c = gcd of y-components; find a combination realizing it
        let e = v1.1.extended_gcd(&v2.1);
        let c = e.gcd.abs().max(
            // both y-components zero cannot happen (det != 0 needs them
            // unless v1.1 = v2.1 = 0 which forces det = 0 in one column)
            0,
        );
        let (w2, c) = if c == 0 {
            // both y-components zero: impossible since det != 0
            unreachable!("det nonzero with zero y-column")
        } else {
            let alpha = if e.gcd.is_negative() { -e.x } else { e.x };
            let beta = if e.gcd.is_negative() { -e.y } else { e.y };
            (
                (
                    alpha
                        .checked_mul(v1.0)
                        .and_then(|t| t.checked_add(beta.checked_mul(v2.0).unwrap()))
                        .expect("basis fits i64"),
                    c,
                ),
                c,
            )
        };
        let a = (det.unsigned_abs() / c.unsigned_abs() as u128) as i64;
        // reduce w2.0 mod a
        let b = w2.0.rem_euclid(a);
        let mut lat = LatticeCoset {
            a,
            b,
            c,
            offset: (0, 0),
        };
        lat.offset = lat.reduce_offset(offset);
        Ok(lat)
    }

    /// x = ax mod mx and y = ay mod my.
    pub fn from_congruences(mx: i64, ax: i64, my: i64, ay: i64) -> Result<Self, LatticeError> {
        if mx <= 0 || my <= 0 {
            return Err(LatticeError::SingularBasis);
        }
        Self::from_basis((mx, 0), (0, my), (ax, ay))
    }

    fn reduce_offset(&self, (ox, oy): (i64, i64)) -> (i64, i64) {
        // subtract multiples of (b, c) to put oy in [0, c), then reduce x
        let n = oy.div_euclid(self.c);
        let oy = oy - n * self.c;
        let ox = (ox - n * self.b).rem_euclid(self.a);
        (ox, oy)
    }

    pub fn index(&self) -> u64 {
        (self.a as u64) * (self.c as u64)
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        if self.a == 1 && self.c == 1 {
            return true;
        }
        let dy = y - self.offset.1;
        if dy.rem_euclid(self.c) != 0 {
            return false;
        }
        let n = dy.div_euclid(self.c);
        let dx = x - self.offset.0 - n * self.b;
        dx.rem_euclid(self.a) == 0
    }

    /// Text form `a,b;c,d` (basis rows) with optional `+ox,oy`.
    pub fn parse(s: &str) -> Result<Self, LatticeError> {
        let (basis, offset) = match s.split_once('+') {
            Some((b, o)) => (b, Some(o)),
            None => (s, None),
        };
        let rows: Vec<&str> = basis.split(';').collect();
        if rows.len() != 2 {
            return Err(LatticeError::Parse("expected two basis rows".into()));
        }
        let parse_pair = |r: &str| -> Result<(i64, i64), LatticeError> {
            let parts: Vec<&str> = r.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(LatticeError::Parse(format!("bad pair '{r}'")));
            }
            let a = parts[0]
                .parse()
                .map_err(|_| LatticeError::Parse(format!("bad integer '{}'", parts[0])))?;
            let b = parts[1]
                .parse()
                .map_err(|_| LatticeError::Parse(format!("bad integer '{}'", parts[1])))?;
            Ok((a, b))
        };
        let v1 = parse_pair(rows[0])?;
        let v2 = parse_pair(rows[1])?;
        let off = match offset {
            Some(o) => parse_pair(o)?,
            None => (0, 0),
        };
        Self::from_basis(v1, v2, off)
    }

    pub fn describe(&self) -> String {
        format!(
            "L[{},0;{},{}]+({},{})",
            self.a, self.b, self.c, self.offset.0, self.offset.1
        )
    }
}
