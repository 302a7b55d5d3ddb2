//! Breadth-first orbit of a chain solution under `{s_0..s_m, π}`.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{apply_generator, ChainState, Generator, WeylError, WeylWord};
use crate::chain::{symmetric_seed, ChainSolution};
use crate::ratfun::BigRat;

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitMember {
    /// A shortest word reaching this member from the seed.
    pub word: WeylWord,
    pub state: ChainState,
    pub solution: ChainSolution,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitEdge {
    pub from: usize,
    pub generator: Generator,
    pub to: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Orbit {
    pub members: Vec<OrbitMember>,
    pub edges: Vec<OrbitEdge>,
    /// `(member, generator)` pairs whose transformation was undefined.
    pub skipped: Vec<(usize, Generator)>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// All members reachable from `seed` by words of length `<= depth`,
/// deduplicated by exact equality of `(α, f)`.
pub fn orbit(seed: &ChainSolution, depth: usize) -> Result<Orbit, WeylError> {
    let start = ChainState::from_solution(seed)?;
    let eps1 = seed.params().eps()[0].clone();
    let c0 = seed.params().c0().clone();
    let n = start.n();
    let gens: Vec<Generator> = (0..n)
        .map(Generator::S)
        .chain(std::iter::once(Generator::Pi))
        .collect();

    let mut orbit = Orbit::default();
    let mut index: HashMap<ChainState, usize> = HashMap::new();
    index.insert(start.clone(), 0);
    orbit.members.push(OrbitMember {
        word: WeylWord::empty(),
        state: start,
        solution: seed.clone(),
    });

    let mut frontier = vec![0usize];
    for _ in 0..depth {
        if frontier.is_empty() {
            break;
        }
        let images: Vec<(usize, Generator, Result<ChainState, WeylError>)> = frontier
            .par_iter()
            .flat_map_iter(|&from| {
                let state = &orbit.members[from].state;
                gens.iter()
                    .map(move |&g| (from, g, apply_generator(g, state)))
            })
            .collect();

        let mut next = Vec::new();
        for (from, generator, image) in images {
            let state = match image {
                Ok(s) => s,
                Err(e) => {
                    log::debug!("orbit: skipping {generator} on member {from}: {e}");
                    orbit.skipped.push((from, generator));
                    continue;
                }
            };
            let to = match index.get(&state) {
                Some(&to) => to,
                None => {
                    let to = orbit.members.len();
                    let solution = state.to_solution(eps1.clone(), c0.clone())?;
                    index.insert(state.clone(), to);
                    orbit.members.push(OrbitMember {
                        word: orbit.members[from].word.then(generator),
                        state,
                        solution,
                    });
                    next.push(to);
                    to
                }
            };
            orbit.edges.push(OrbitEdge {
                from,
                generator,
                to,
            });
        }
        frontier = next;
    }
    Ok(orbit)
}

/// Orbit of the symmetric seed of period `n`.
pub fn orbit_from_seed(
    n: usize,
    lambda: BigRat,
    c0: BigRat,
    depth: usize,
) -> Result<Orbit, WeylError> {
    let seed = symmetric_seed(n, lambda, c0)?;
    orbit(&seed, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::rat as q;

    #[test]
    fn depth_zero_is_seed() {
        let o = orbit_from_seed(3, q(1, 1), q(0, 1), 0).unwrap();
        assert_eq!(o.len(), 1);
        assert!(o.edges.is_empty());
    }

    #[test]
    fn m2_depth1_has_three_reflections() {
        let o = orbit_from_seed(3, q(1, 1), q(0, 1), 1).unwrap();
        assert_eq!(o.len(), 4);
        // pi fixes the seed: a self loop
        assert!(o.edges.contains(&OrbitEdge {
            from: 0,
            generator: Generator::Pi,
            to: 0
        }));
        for member in &o.members {
            assert!(member.solution.is_solution());
            assert_eq!(member.state.alpha.sum(), q(2, 1));
        }
    }

    #[test]
    fn members_solve_chain_at_depth3() {
        for n in [2, 3, 4] {
            let o = orbit_from_seed(n, q(1, 1), q(1, 2), 3).unwrap();
            assert!(o.len() > n);
            for member in &o.members {
                assert!(member.solution.is_solution(), "n={n} word={}", member.word);
            }
        }
    }

    #[test]
    fn words_reproduce_members() {
        let seed = symmetric_seed(4, q(2, 1), q(0, 1)).unwrap();
        let o = orbit(&seed, 2).unwrap();
        let start = ChainState::from_solution(&seed).unwrap();
        for member in &o.members {
            assert_eq!(
                super::super::apply_word(&member.word, &start).unwrap(),
                member.state
            );
        }
    }
}
