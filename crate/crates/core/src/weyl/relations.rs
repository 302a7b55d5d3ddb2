//! Randomized exact verification of the defining relations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{apply_word, CartanMatrix, ChainState, Generator, WeylError, WeylWord};
use crate::chain::AlphaVector;
use crate::parse::format_rational;
use crate::ratfun::{BigRat, RatFun};

/// Input on which a relation failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub trial: usize,
    pub alpha: Vec<String>,
    pub f: Vec<String>,
    pub lhs_alpha: Vec<String>,
    pub rhs_alpha: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckStatus {
    Held {
        trials: usize,
        undefined: usize,
    },
    Violated {
        failures: usize,
        witness: Box<Witness>,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    #[serde(flatten)]
    pub status: CheckStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationReport {
    pub m: usize,
    pub trials: usize,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn violations(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| matches!(c.status, CheckStatus::Violated { .. }))
            .count()
    }

    pub fn all_hold(&self) -> bool {
        self.violations() == 0
    }

    pub fn skipped(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks
            .iter()
            .filter(|c| matches!(c.status, CheckStatus::Skipped { .. }))
    }

    pub fn find(&self, relation: &str) -> Option<&RelationCheck> {
        self.checks.iter().find(|c| c.relation == relation)
    }
}

struct Relation {
    name: String,
    lhs: WeylWord,
    rhs: WeylWord,
}

fn relation_list(m: usize) -> Result<(Vec<Relation>, Vec<RelationCheck>), WeylError> {
    use Generator::*;
    let cartan = CartanMatrix::new(m)?;
    let n = m + 1;
    let mut rels = Vec::new();
    let mut skipped = Vec::new();
    for i in 0..n {
        rels.push(Relation {
            name: format!("s{i}^2 = 1"),
            lhs: WeylWord(vec![S(i), S(i)]),
            rhs: WeylWord::empty(),
        });
    }
    let mut commuting = 0;
    for i in 0..n {
        for j in i + 1..n {
            match cartan.relation_order(i, j) {
                Some(order) => {
                    commuting += usize::from(order == 2);
                    rels.push(Relation {
                        name: format!("(s{i} s{j})^{order} = 1"),
                        lhs: WeylWord(vec![S(i), S(j)]).repeat(order as usize),
                        rhs: WeylWord::empty(),
                    });
                }
                None => skipped.push(RelationCheck {
                    relation: format!("(s{i} s{j})^k = 1"),
                    status: CheckStatus::Skipped {
                        reason: format!(
                            "a{i}{j}*a{j}{i} = {}: s{i} s{j} has infinite order",
                            cartan.entry(i, j) * cartan.entry(j, i)
                        ),
                    },
                }),
            }
        }
    }
    if commuting == 0 {
        skipped.push(RelationCheck {
            relation: "(s_i s_j)^2 = 1, j != i, i±1".into(),
            status: CheckStatus::Skipped {
                reason: format!("no non-adjacent pair on the {n}-cycle"),
            },
        });
    }
    for i in 0..n {
        rels.push(Relation {
            name: format!("pi s{i} = s{} pi", (i + 1) % n),
            lhs: WeylWord(vec![Pi, S(i)]),
            rhs: WeylWord(vec![S((i + 1) % n), Pi]),
        });
    }
    rels.push(Relation {
        name: format!("pi^{n} = 1"),
        lhs: WeylWord(vec![Pi; n]),
        rhs: WeylWord::empty(),
    });
    rels.push(Relation {
        name: "pi pi^-1 = 1".into(),
        lhs: WeylWord(vec![Pi, PiInv]),
        rhs: WeylWord::empty(),
    });
    Ok((rels, skipped))
}

fn random_rat(rng: &mut ChaCha8Rng, span: i64, max_den: i64) -> BigRat {
    BigRat::new(
        rng.random_range(-span..=span).into(),
        rng.random_range(1..=max_den).into(),
    )
}

/// Random α with nonzero sum and `f_i = λx/n + δ_i`, a perturbed seed.
fn random_state(n: usize, rng: &mut ChaCha8Rng) -> ChainState {
    let alpha = loop {
        let a: Vec<BigRat> = (0..n).map(|_| random_rat(rng, 9, 6)).collect();
        if a.iter().sum::<BigRat>() != BigRat::from_integer(0.into()) {
            break a;
        }
    };
    let alpha = AlphaVector::from_components(alpha).expect("sum is 2*lambda by construction");
    let slope = alpha.lambda() / BigRat::from_integer(n.into());
    let f = (0..n)
        .map(|_| RatFun::linear(slope.clone(), random_rat(rng, 5, 4)))
        .collect();
    ChainState::new(f, alpha).expect("period >= 2")
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Checks every defining relation of `W̃(A_m^(1))` on `trials` random
/// states, exactly. Relation orders come from the Cartan matrix, so for
/// `m = 1` the pair `s_0, s_1` is reported as skipped (infinite order).
pub fn verify_relations(m: usize, trials: usize, seed: u64) -> Result<RelationReport, WeylError> {
    let (rels, skipped) = relation_list(m)?;
    let n = m + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<ChainState> = (0..trials).map(|_| random_state(n, &mut rng)).collect();

    let mut checks: Vec<RelationCheck> = rels
        .iter()
        .map(|rel| {
            let mut held = 0;
            let mut undefined = 0;
            let mut failures = 0;
            let mut witness = None;
            for (t, st) in states.iter().enumerate() {
                match (apply_word(&rel.lhs, st), apply_word(&rel.rhs, st)) {
                    (Ok(l), Ok(r)) if l == r => held += 1,
                    (Ok(l), Ok(r)) => {
                        failures += 1;
                        witness.get_or_insert_with(|| {
                            Box::new(Witness {
                                trial: t,
                                alpha: st.alpha.values().iter().map(format_rational).collect(),
                                f: strings(&st.f),
                                lhs_alpha: l.alpha.values().iter().map(format_rational).collect(),
                                rhs_alpha: r.alpha.values().iter().map(format_rational).collect(),
                            })
                        });
                    }
                    _ => undefined += 1,
                }
            }
            let status = match witness {
                Some(witness) => CheckStatus::Violated { failures, witness },
                None => CheckStatus::Held {
                    trials: held,
                    undefined,
                },
            };
            RelationCheck {
                relation: rel.name.clone(),
                status,
            }
        })
        .collect();
    checks.extend(skipped);
    Ok(RelationReport { m, trials, checks })
}
