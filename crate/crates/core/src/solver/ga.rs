//! Generational genetic algorithm baseline over fixed-size committees.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bpso::best_index;
use crate::error::{Error, Result};
use crate::independence::{random_committee, Committee, Scored};
use crate::instance::Instance;
use crate::local_search::swap_neighbor;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population: usize,
    pub tournament_size: usize,
    /// Probability that a child receives one random member swap.
    pub mutation_rate: f64,
    /// Best individuals copied unchanged into the next generation.
    pub elitism: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 50,
            tournament_size: 2,
            mutation_rate: 0.1,
            elitism: 1,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::config("GA population must be at least 2"));
        }
        if self.tournament_size == 0 || self.tournament_size > self.population {
            return Err(Error::config("tournament size must lie in 1..=population"));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::config("mutation rate must lie in [0, 1]"));
        }
        if self.elitism >= self.population {
            return Err(Error::config("elitism must be smaller than the population"));
        }
        Ok(())
    }

    /// Fitness evaluations for a run of `generations` generations.
    pub fn evaluations(&self, generations: u64) -> u64 {
        self.population as u64 + (self.population - self.elitism) as u64 * generations
    }
}

pub(crate) struct Genetic<'a> {
    instance: &'a Instance,
    cfg: &'a GaConfig,
    population: Vec<Scored>,
    best: Scored,
    pub evaluations: u64,
}

impl<'a> Genetic<'a> {
    pub fn random<R: Rng + ?Sized>(instance: &'a Instance, cfg: &'a GaConfig, k: usize, rng: &mut R) -> Result<Self> {
        let individuals = (0..cfg.population)
            .map(|_| random_committee(instance.node_count(), k, rng))
            .collect::<Result<Vec<_>>>()?;
        Self::from_population(instance, cfg, individuals)
    }

    pub fn from_population(instance: &'a Instance, cfg: &'a GaConfig, individuals: Vec<Committee>) -> Result<Self> {
        cfg.validate()?;
        if individuals.len() != cfg.population {
            return Err(Error::config(format!(
                "initial population has {} individuals, expected {}",
                individuals.len(),
                cfg.population
            )));
        }
        let population = individuals
            .into_iter()
            .map(|c| instance.score(c))
            .collect::<Result<Vec<_>>>()?;
        let best = population[best_index(&population).expect("non-empty")].clone();
        Ok(Genetic {
            instance,
            cfg,
            evaluations: population.len() as u64,
            population,
            best,
        })
    }

    pub fn best(&self) -> &Scored {
        &self.best
    }

    fn tournament<R: Rng + ?Sized>(&self, rng: &mut R) -> &Scored {
        let mut winner = &self.population[rng.gen_range(0..self.population.len())];
        for _ in 1..self.cfg.tournament_size {
            let rival = &self.population[rng.gen_range(0..self.population.len())];
            if rival.value() > winner.value() {
                winner = rival;
            }
        }
        winner
    }

    /// Child drawn uniformly from the union of both parents' members.
    fn crossover<R: Rng + ?Sized>(a: &Committee, b: &Committee, rng: &mut R) -> Committee {
        let mut pool: Vec<usize> = a.members().iter().chain(b.members()).copied().collect();
        pool.sort_unstable();
        pool.dedup();
        let mut members: Vec<usize> = index::sample(rng, pool.len(), a.k())
            .into_iter()
            .map(|i| pool[i])
            .collect();
        members.sort_unstable();
        Committee::from_sorted(members)
    }

    pub fn generation<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<()> {
        let mut ranked: Vec<usize> = (0..self.population.len()).collect();
        ranked.sort_by(|&i, &j| {
            self.population[j]
                .value()
                .total_cmp(&self.population[i].value())
                .then(i.cmp(&j))
        });
        let mut next: Vec<Scored> = ranked[..self.cfg.elitism]
            .iter()
            .map(|&i| self.population[i].clone())
            .collect();
        while next.len() < self.cfg.population {
            let child = {
                let a = &self.tournament(rng).committee;
                let b = &self.tournament(rng).committee;
                Self::crossover(a, b, rng)
            };
            let child = if rng.gen::<f64>() < self.cfg.mutation_rate {
                swap_neighbor(&child, self.instance.node_count(), rng)?
            } else {
                child
            };
            next.push(self.instance.score(child)?);
            self.evaluations += 1;
        }
        self.population = next;
        if let Some(i) = best_index(&self.population) {
            if self.population[i].value() > self.best.value() {
                self.best = self.population[i].clone();
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::graph::tests::path;

    #[test]
    fn crossover_stays_in_union() {
        let a = Committee::new(vec![1, 4, 9], 20).unwrap();
        let b = Committee::new(vec![4, 12, 15], 20).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let child = Genetic::crossover(&a, &b, &mut rng);
            assert_eq!(child.k(), 3);
            assert!(child.members().iter().all(|&m| a.contains(m) || b.contains(m)));
        }
    }

    #[test]
    fn evaluation_bookkeeping() {
        let inst = Instance::new(path(12)).unwrap();
        let cfg = GaConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut ga = Genetic::random(&inst, &cfg, 3, &mut rng).unwrap();
        for _ in 0..7 {
            ga.generation(&mut rng).unwrap();
        }
        assert_eq!(ga.evaluations, cfg.evaluations(7));
    }

    #[test]
    fn config_validation() {
        let bad = GaConfig {
            elitism: 50,
            ..GaConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(GaConfig {
            mutation_rate: 1.5,
            ..GaConfig::default()
        }
        .validate()
        .is_err());
    }
}
