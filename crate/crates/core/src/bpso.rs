//! Binary particle swarm optimization over committee indicator vectors.
//!
//! Velocities follow the usual inertia / personal / social update and are
//! clamped to `[-v_max, v_max]`. Each bit is then resampled as 1 with
//! probability `sigmoid(v)`, and the position is repaired back to exactly
//! `k` ones.

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::independence::{random_committee, Committee, Scored};
use crate::instance::Instance;

pub fn sigmoid(v: f64) -> f64 {
    1.0 / (1.0 + (-v).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    GlobalBest,
    /// Each particle follows the best personal best among itself and its two
    /// ring neighbors.
    RingLocalBest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwarmConfig {
    pub w: f64,
    pub c1: f64,
    pub c2: f64,
    pub v_max: f64,
    pub population: usize,
    pub max_iterations: u64,
    pub topology: Topology,
}

impl Default for SwarmConfig {
    fn default() -> Self {
        SwarmConfig {
            w: 2.0,
            c1: 2.0,
            c2: 2.0,
            v_max: 6.0,
            population: 30,
            max_iterations: 500,
            topology: Topology::GlobalBest,
        }
    }
}

impl SwarmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.w >= 0.0 && self.c1 >= 0.0 && self.c2 >= 0.0) {
            return Err(Error::config("w, c1 and c2 must be non-negative"));
        }
        if !(self.v_max > 0.0 && self.v_max.is_finite()) {
            return Err(Error::config("v_max must be positive"));
        }
        if self.population < 2 {
            return Err(Error::config("swarm population must be at least 2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    position: Vec<bool>,
    velocity: Vec<f64>,
    personal_best: Scored,
}

impl Particle {
    pub fn new(position: Vec<bool>, velocity: Vec<f64>, personal_best: Scored) -> Self {
        Particle {
            position,
            velocity,
            personal_best,
        }
    }

    pub fn position(&self) -> &[bool] {
        &self.position
    }

    pub fn velocity(&self) -> &[f64] {
        &self.velocity
    }

    pub fn personal_best(&self) -> &Scored {
        &self.personal_best
    }

    pub fn ones(&self) -> usize {
        self.position.iter().filter(|&&b| b).count()
    }

    /// Probability that each bit is sampled as 1 on the next update.
    pub fn flip_probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.velocity.iter().map(|&v| sigmoid(v))
    }
}

/// Forces exactly `k` ones: surplus ones are cleared, or missing ones set,
/// at uniformly random positions. Other bits are left alone.
pub fn repair_to_k<R: Rng + ?Sized>(position: &mut [bool], k: usize, rng: &mut R) -> Result<()> {
    if k > position.len() {
        return Err(Error::InvalidCommitteeSize {
            k,
            reason: format!("position has only {} bits", position.len()),
        });
    }
    let ones: Vec<usize> = (0..position.len()).filter(|&i| position[i]).collect();
    if ones.len() > k {
        for i in index::sample(rng, ones.len(), ones.len() - k) {
            position[ones[i]] = false;
        }
    } else if ones.len() < k {
        let zeros: Vec<usize> = (0..position.len()).filter(|&i| !position[i]).collect();
        for i in index::sample(rng, zeros.len(), k - ones.len()) {
            position[zeros[i]] = true;
        }
    }
    Ok(())
}

/// Walks a sorted member list alongside increasing bit indices.
struct MemberCursor<'a> {
    members: &'a [usize],
    at: usize,
}

impl<'a> MemberCursor<'a> {
    fn new(committee: &'a Committee) -> Self {
        MemberCursor {
            members: committee.members(),
            at: 0,
        }
    }

    /// Must be called with strictly increasing `d`.
    fn bit(&mut self, d: usize) -> f64 {
        while self.at < self.members.len() && self.members[self.at] < d {
            self.at += 1;
        }
        if self.members.get(self.at) == Some(&d) {
            1.0
        } else {
            0.0
        }
    }
}

/// One velocity/position update of a particle towards `guide`, followed by
/// repair and personal-best bookkeeping. Returns true if the personal best
/// improved.
pub fn update_particle<R: Rng + ?Sized>(
    particle: &mut Particle,
    guide: &Committee,
    cfg: &SwarmConfig,
    instance: &Instance,
    rng: &mut R,
) -> Result<bool> {
    let k = guide.k();
    {
        let mut own = MemberCursor::new(&particle.personal_best.committee);
        let mut social = MemberCursor::new(guide);
        for d in 0..particle.position.len() {
            let x = if particle.position[d] { 1.0 } else { 0.0 };
            let r1: f64 = rng.gen();
            let r2: f64 = rng.gen();
            let v = cfg.w * particle.velocity[d]
                + cfg.c1 * r1 * (own.bit(d) - x)
                + cfg.c2 * r2 * (social.bit(d) - x);
            let v = v.clamp(-cfg.v_max, cfg.v_max);
            particle.velocity[d] = v;
            particle.position[d] = rng.gen::<f64>() < sigmoid(v);
        }
    }
    repair_to_k(&mut particle.position, k, rng)?;
    let candidate = instance.score(Committee::from_bits(&particle.position)?)?;
    if candidate.value() > particle.personal_best.value() {
        particle.personal_best = candidate;
        Ok(true)
    } else {
        Ok(false)
    }
}

/// Index of the first entry with the strictly highest fitness.
pub(crate) fn best_index<'a>(scores: impl IntoIterator<Item = &'a Scored>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in scores.into_iter().enumerate() {
        if best.is_none_or(|(_, v)| s.value() > v) {
            best = Some((i, s.value()));
        }
    }
    best.map(|(i, _)| i)
}

#[derive(Debug, Clone)]
pub struct Swarm {
    particles: Vec<Particle>,
    global_best: Scored,
    iteration: u64,
    evaluations: u64,
    rng: ChaCha8Rng,
}

impl Swarm {
    /// Random committees as positions, velocities uniform in `[-1, 1]`.
    pub fn new(instance: &Instance, k: usize, cfg: &SwarmConfig, mut rng: ChaCha8Rng) -> Result<Self> {
        cfg.validate()?;
        let n = instance.node_count();
        let mut particles = Vec::with_capacity(cfg.population);
        for _ in 0..cfg.population {
            let committee = random_committee(n, k, &mut rng)?;
            let velocity = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let position = committee.to_bits(n);
            particles.push(Particle::new(position, velocity, instance.score(committee)?));
        }
        let best = best_index(particles.iter().map(|p| &p.personal_best)).expect("population >= 2");
        Ok(Swarm {
            global_best: particles[best].personal_best.clone(),
            particles,
            iteration: 0,
            evaluations: cfg.population as u64,
            rng,
        })
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn global_best(&self) -> &Scored {
        &self.global_best
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    /// Fitness evaluations spent by the swarm so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Replaces the global best if `candidate` is strictly better.
    pub fn offer(&mut self, candidate: Scored) -> bool {
        if candidate.value() > self.global_best.value() {
            self.global_best = candidate;
            true
        } else {
            false
        }
    }

    fn guides(&self, cfg: &SwarmConfig) -> Vec<Committee> {
        match cfg.topology {
            Topology::GlobalBest => vec![self.global_best.committee.clone()],
            Topology::RingLocalBest => {
                let n = self.particles.len();
                (0..n)
                    .map(|i| {
                        let hood = [(i + n - 1) % n, i, (i + 1) % n];
                        let j = best_index(hood.iter().map(|&j| &self.particles[j].personal_best))
                            .expect("non-empty neighborhood");
                        self.particles[hood[j]].personal_best.committee.clone()
                    })
                    .collect()
            }
        }
    }

    /// One generation: every particle moves towards the guides taken at the
    /// start of the step, then the global best absorbs any better personal
    /// best.
    pub fn step(&mut self, instance: &Instance, cfg: &SwarmConfig) -> Result<()> {
        let guides = self.guides(cfg);
        for (i, particle) in self.particles.iter_mut().enumerate() {
            let guide = &guides[i.min(guides.len() - 1)];
            update_particle(particle, guide, cfg, instance, &mut self.rng)?;
            self.evaluations += 1;
        }
        if let Some(best) = best_index(self.particles.iter().map(|p| &p.personal_best)) {
            let candidate = self.particles[best].personal_best.clone();
            self.offer(candidate);
        }
        self.iteration += 1;
        Ok(())
    }
}
