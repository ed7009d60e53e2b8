//! Transfer of sections along a chain of rational curves.

use std::fmt;

use super::StabilityError;

/// A bundle on a chain `D_1 ... D_n` given by the splitting type on each
/// component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainBundle {
    pub splitting: Vec<Vec<i64>>,
}

/// Dimensions `W_0 ... W_n` of the transferred subspaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub dims: Vec<i64>,
    pub forward: i64,
}

impl ChainBundle {
    pub fn new(splitting: Vec<Vec<i64>>) -> Self {
        ChainBundle { splitting }
    }

    /// From the number of degree-1 factors on each component.
    pub fn from_ones(r: i64, ones: &[i64]) -> Self {
        ChainBundle {
            splitting: ones
                .iter()
                .map(|&a| {
                    let a = a.clamp(0, r);
                    let mut v = vec![0; (r - a) as usize];
                    v.extend(std::iter::repeat_n(1, a as usize));
                    v
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.splitting.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splitting.is_empty()
    }

    /// No negative degree factors.
    pub fn is_admissible(&self) -> bool {
        self.splitting.iter().flatten().all(|&d| d >= 0)
    }

    pub fn degree(&self) -> i64 {
        self.splitting.iter().flatten().sum()
    }

    /// Counts of degree-1 factors, requiring every degree in {0, 1} and
    /// rank `r` on every component.
    pub fn ones(&self, r: i64) -> Result<Vec<i64>, StabilityError> {
        let mut out = Vec::with_capacity(self.len());
        for (i, comp) in self.splitting.iter().enumerate() {
            if comp.len() as i64 != r {
                return Err(StabilityError::ChainRank {
                    component: i + 1,
                    expected: r,
                    found: comp.len(),
                });
            }
            if let Some(&d) = comp.iter().find(|&&d| d != 0 && d != 1) {
                return Err(StabilityError::Degree {
                    component: i + 1,
                    degree: d,
                });
            }
            out.push(comp.iter().sum());
        }
        Ok(out)
    }

    /// Components separated by `|`, degrees by spaces or commas.
    pub fn parse(text: &str) -> Result<Self, StabilityError> {
        let mut splitting = Vec::new();
        let mut offset = 0;
        for part in text.split('|') {
            let mut comp = Vec::new();
            let mut col = offset;
            for tok in part.split(|c: char| c.is_whitespace() || c == ',') {
                if !tok.is_empty() {
                    let d = tok.parse::<i64>().map_err(|_| StabilityError::Parse {
                        line: 1,
                        column: col + 1,
                        message: format!("expected an integer degree, found `{tok}`"),
                    })?;
                    comp.push(d);
                }
                col += tok.chars().count() + 1;
            }
            if comp.is_empty() {
                return Err(StabilityError::Parse {
                    line: 1,
                    column: offset + 1,
                    message: "empty component".into(),
                });
            }
            splitting.push(comp);
            offset += part.chars().count() + 1;
        }
        Ok(ChainBundle { splitting })
    }
}

impl fmt::Display for ChainBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, comp) in self.splitting.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            let s: Vec<String> = comp.iter().map(|d| d.to_string()).collect();
            f.write_str(&s.join(" "))?;
        }
        Ok(())
    }
}

fn run(r: i64, ones: impl Iterator<Item = i64>) -> Transfer {
    let mut dims = vec![0];
    for a in ones {
        let prev = *dims.last().unwrap();
        dims.push((prev + a).min(r));
    }
    let forward = *dims.last().unwrap();
    Transfer { dims, forward }
}

/// Sections vanishing at `q_0`, followed to `q_n` with generic gluing:
/// `W_0 = 0`, `W_i = min(r, W_{i-1} + a_i)`.
pub fn transfer(cb: &ChainBundle, r: i64) -> Result<Transfer, StabilityError> {
    let ones = cb.ones(r)?;
    Ok(run(r, ones.into_iter()))
}

/// The same from the other end: sections vanishing at `q_n`.
pub fn reverse_transfer(cb: &ChainBundle, r: i64) -> Result<Transfer, StabilityError> {
    let ones = cb.ones(r)?;
    Ok(run(r, ones.into_iter().rev()))
}

/// Each component adds exactly its degree to the transfer.
pub fn is_regular(cb: &ChainBundle, r: i64) -> bool {
    let Ok(ones) = cb.ones(r) else {
        return false;
    };
    let t = run(r, ones.iter().copied());
    t.dims.windows(2).zip(&ones).all(|(w, a)| w[1] == w[0] + a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transfer_examples() {
        let trivial = ChainBundle::from_ones(3, &[0, 0]);
        assert_eq!(transfer(&trivial, 3).unwrap().forward, 0);
        let reg = ChainBundle::from_ones(3, &[1, 1, 1]);
        let t = transfer(&reg, 3).unwrap();
        assert_eq!(t.dims, vec![0, 1, 2, 3]);
        assert_eq!(t.forward, reg.degree());
        assert!(is_regular(&reg, 3));
        let over = ChainBundle::from_ones(3, &[2, 2]);
        let t = transfer(&over, 3).unwrap();
        assert_eq!(t.dims, vec![0, 2, 3]);
        assert_eq!(t.forward, 3);
        assert!(!is_regular(&over, 3));
    }

    #[test]
    fn degree_two_is_rejected() {
        let cb = ChainBundle::new(vec![vec![0, 0, 2]]);
        assert!(matches!(
            transfer(&cb, 3),
            Err(StabilityError::Degree {
                component: 1,
                degree: 2
            })
        ));
        assert!(!is_regular(&cb, 3));
        assert!(cb.is_admissible());
        assert!(!ChainBundle::new(vec![vec![-1, 1, 0]]).is_admissible());
    }

    #[test]
    fn reverse_transfer_agrees_on_regular_bundles() {
        let cb = ChainBundle::from_ones(3, &[1, 0, 2]);
        assert_eq!(reverse_transfer(&cb, 3).unwrap().dims, vec![0, 2, 2, 3]);
        assert_eq!(
            transfer(&cb, 3).unwrap().forward,
            reverse_transfer(&cb, 3).unwrap().forward
        );
    }

    #[test]
    fn text_round_trip() {
        let cb = ChainBundle::parse("0 0 1 | 0,1,1|1 1 1").unwrap();
        assert_eq!(
            cb.splitting,
            vec![vec![0, 0, 1], vec![0, 1, 1], vec![1, 1, 1]]
        );
        assert_eq!(ChainBundle::parse(&cb.to_string()).unwrap(), cb);
        let e = ChainBundle::parse("0 x 1").unwrap_err();
        assert!(matches!(e, StabilityError::Parse { column: 3, .. }));
        assert!(ChainBundle::parse("0 1 ||").is_err());
    }
}
