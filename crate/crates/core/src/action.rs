//! Isometry words acting on classes from the right, and orbit expansion of
//! curve systems.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::curves::CurveSystem;
use crate::lattice::{dot, validate_isometry, IsometryMatrix, LatticeError, LatticeVector, RANK};

/// A word `g1^e1 g2^e2 ...`, applied left to right.
pub type Word = Vec<(String, i32)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator {name}: {source}")]
    InvalidGenerator {
        name: String,
        #[source]
        source: LatticeError,
    },
    #[error("generator {0} has no integral inverse")]
    NoInverse(String),
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("orbit image {label} {problem}")]
    InvariantViolation { label: String, problem: String },
}

/// Named isometries with cached inverses, in a fixed order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorSet {
    names: Vec<String>,
    matrices: Vec<IsometryMatrix>,
    inverses: Vec<IsometryMatrix>,
}

impl GeneratorSet {
    pub fn new(
        generators: impl IntoIterator<Item = (String, [[i64; RANK]; RANK])>,
    ) -> Result<Self, ActionError> {
        let mut set = Self::default();
        for (name, m) in generators {
            if set.names.contains(&name) {
                return Err(ActionError::DuplicateName(name));
            }
            let iso = validate_isometry(m).map_err(|source| ActionError::InvalidGenerator {
                name: name.clone(),
                source,
            })?;
            let inv = iso.inverse();
            if !iso.then(&inv).is_identity() {
                return Err(ActionError::NoInverse(name));
            }
            set.names.push(name);
            set.matrices.push(iso);
            set.inverses.push(inv);
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn index(&self, name: &str) -> Result<usize, ActionError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| ActionError::UnknownGenerator(name.to_string()))
    }

    pub fn get(&self, name: &str) -> Result<&IsometryMatrix, ActionError> {
        Ok(&self.matrices[self.index(name)?])
    }

    pub fn inverse(&self, name: &str) -> Result<&IsometryMatrix, ActionError> {
        Ok(&self.inverses[self.index(name)?])
    }

    /// `name^exp`, negative exponents through the cached inverse.
    pub fn power(&self, name: &str, exp: i32) -> Result<IsometryMatrix, ActionError> {
        let i = self.index(name)?;
        let base = if exp < 0 {
            &self.inverses[i]
        } else {
            &self.matrices[i]
        };
        Ok(base.pow(exp.unsigned_abs()))
    }

    pub fn word_matrix(&self, word: &[(String, i32)]) -> Result<IsometryMatrix, ActionError> {
        word.iter()
            .try_fold(IsometryMatrix::identity(), |acc, (g, e)| {
                Ok(acc.then(&self.power(g, *e)?))
            })
    }
}

/// `v` right-multiplied by each generator power in turn.
pub fn apply_word(
    v: &LatticeVector,
    word: &[(String, i32)],
    gens: &GeneratorSet,
) -> Result<LatticeVector, ActionError> {
    word.iter().try_fold(*v, |acc, (g, e)| {
        let i = gens.index(g)?;
        let m = if *e < 0 {
            &gens.inverses[i]
        } else {
            &gens.matrices[i]
        };
        Ok((0..e.unsigned_abs()).fold(acc, |x, _| m.apply(&x)))
    })
}

/// `base·g1^e1·g2^e2`, the label format shared by data files and orbit output.
pub fn word_label(base: &str, word: &[(String, i32)]) -> String {
    let mut s = base.to_string();
    for (g, e) in word {
        s.push('·');
        s.push_str(g);
        if *e != 1 {
            s.push_str(&format!("^{e}"));
        }
    }
    s
}

/// A curve of a system moved by a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitWord {
    pub base: usize,
    pub word: Word,
}

impl OrbitWord {
    pub fn resolve(
        &self,
        system: &CurveSystem,
        gens: &GeneratorSet,
    ) -> Result<LatticeVector, ActionError> {
        apply_word(system.curve(self.base), &self.word, gens)
    }

    pub fn label(&self, system: &CurveSystem) -> String {
        word_label(system.label(self.base), &self.word)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub lhs: Word,
    pub rhs: Word,
    pub holds: bool,
}

impl fmt::Display for RelationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |w: &Word| {
            if w.is_empty() {
                "I".to_string()
            } else {
                word_label("", w).trim_start_matches('·').replace('·', " ")
            }
        };
        let rel = if self.holds { "=" } else { "!=" };
        write!(f, "{} {} {}", show(&self.lhs), rel, show(&self.rhs))
    }
}

/// Evaluates both sides of each relation as matrices.
pub fn check_relations(
    gens: &GeneratorSet,
    relations: &[(Word, Word)],
) -> Result<Vec<RelationCheck>, ActionError> {
    relations
        .iter()
        .map(|(l, r)| {
            Ok(RelationCheck {
                lhs: l.clone(),
                rhs: r.clone(),
                holds: gens.word_matrix(l)? == gens.word_matrix(r)?,
            })
        })
        .collect()
}

/// Words are compared generator by generator, `g` before `g^-1`, earlier
/// generators first.
fn letter_key(gens: &GeneratorSet, word: &[(String, i32)]) -> Vec<(usize, bool)> {
    let mut key = Vec::new();
    for (g, e) in word {
        let i = gens.index(g).expect("word built from known generators");
        key.extend(std::iter::repeat_n((i, *e < 0), e.unsigned_abs() as usize));
    }
    key
}

fn push_letter(word: &Word, name: &str, e: i32) -> Word {
    let mut w = word.clone();
    match w.last_mut() {
        Some((g, x)) if g == name => {
            *x += e;
            if *x == 0 {
                w.pop();
            }
        }
        _ => w.push((name.to_string(), e)),
    }
    w
}

/// Closes `system` under words of length at most `radius`.
///
/// Original curves keep their positions. New curves are appended level by
/// level; within a level they are ordered by (base curve, word), each keeping
/// its smallest word as label. An image that meets an existing curve
/// negatively signals generators that are not automorphisms of the curve
/// data and aborts the expansion.
pub fn expand_orbit(
    system: &CurveSystem,
    gens: &GeneratorSet,
    radius: usize,
) -> Result<CurveSystem, ActionError> {
    let mut out = system.clone();
    let mut seen: HashSet<LatticeVector> = system.curves().iter().copied().collect();
    let mut frontier: Vec<(usize, Word, LatticeVector)> = (0..system.len())
        .map(|i| (i, Vec::new(), *system.curve(i)))
        .collect();
    for _ in 0..radius {
        let mut level: HashMap<LatticeVector, (usize, Word)> = HashMap::new();
        for (base, word, v) in &frontier {
            for (gi, name) in gens.names.iter().enumerate() {
                for (e, m) in [(1, &gens.matrices[gi]), (-1, &gens.inverses[gi])] {
                    let img = m.apply(v);
                    if seen.contains(&img) {
                        continue;
                    }
                    let w = push_letter(word, name, e);
                    let better = match level.get(&img) {
                        None => true,
                        Some((b, old)) => {
                            (*base, letter_key(gens, &w)) < (*b, letter_key(gens, old))
                        }
                    };
                    if better {
                        level.insert(img, (*base, w));
                    }
                }
            }
        }
        let mut fresh: Vec<(usize, Word, LatticeVector)> =
            level.into_iter().map(|(v, (b, w))| (b, w, v)).collect();
        fresh.sort_by_cached_key(|(b, w, _)| (*b, letter_key(gens, w)));
        let mut added = Vec::with_capacity(fresh.len());
        for (b, w, v) in &fresh {
            let label = word_label(system.label(*b), w);
            if v.square() != -2 {
                return Err(ActionError::InvariantViolation {
                    label,
                    problem: format!("has square {}", v.square()),
                });
            }
            let clash = out
                .curves()
                .iter()
                .chain(added.iter().map(|(x, _)| x))
                .position(|c| dot(c, v) < 0);
            if let Some(j) = clash {
                return Err(ActionError::InvariantViolation {
                    label,
                    problem: format!("meets curve {j} negatively"),
                });
            }
            seen.insert(*v);
            added.push((*v, label));
        }
        out.extend_unchecked(added);
        frontier = fresh;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(out)
}
