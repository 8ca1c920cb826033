use crate::noise::Noise;

/// Partition of agents into herding clusters.
///
/// Each step either lets the cluster of a uniformly chosen agent trade (it
/// emits a return proportional to its size with a fair random sign and then
/// dissolves into singletons) or merges the clusters of two uniformly chosen
/// agents.
#[derive(Debug, Clone)]
pub struct EzMarket {
    cluster_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    free: Vec<usize>,
}

impl EzMarket {
    /// All agents start as singletons.
    pub fn new(n_agents: usize) -> Self {
        Self {
            cluster_of: (0..n_agents).collect(),
            members: (0..n_agents).map(|i| vec![i]).collect(),
            free: Vec::new(),
        }
    }

    pub fn n_agents(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn cluster_size_of(&self, agent: usize) -> usize {
        self.members[self.cluster_of[agent]].len()
    }

    /// Sizes of the non-empty clusters.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        self.members
            .iter()
            .map(Vec::len)
            .filter(|&s| s > 0)
            .collect()
    }

    /// The cluster of `agent` trades and dissolves. Returns `+-size / n_agents`.
    pub fn trade(&mut self, agent: usize, buy: bool) -> f64 {
        let cluster = self.cluster_of[agent];
        let agents = std::mem::take(&mut self.members[cluster]);
        let size = agents.len();
        let mut rest = agents.into_iter();
        if let Some(first) = rest.next() {
            self.members[cluster].push(first);
        }
        for a in rest {
            let slot = self
                .free
                .pop()
                .expect("free slots cover every dissolved agent");
            self.members[slot].push(a);
            self.cluster_of[a] = slot;
        }
        let magnitude = size as f64 / self.n_agents() as f64;
        if buy {
            magnitude
        } else {
            -magnitude
        }
    }

    /// Merges the clusters of `i` and `j`. Returns false if they already coincide.
    pub fn merge(&mut self, i: usize, j: usize) -> bool {
        let (mut keep, mut gone) = (self.cluster_of[i], self.cluster_of[j]);
        if keep == gone {
            return false;
        }
        if self.members[keep].len() < self.members[gone].len() {
            std::mem::swap(&mut keep, &mut gone);
        }
        let moved = std::mem::take(&mut self.members[gone]);
        for &a in &moved {
            self.cluster_of[a] = keep;
        }
        self.members[keep].extend(moved);
        self.free.push(gone);
        true
    }

    /// One update with trade probability `a`. Merge steps emit `0.0`.
    pub fn step(&mut self, a: f64, noise: &mut Noise) -> f64 {
        let n = self.n_agents();
        if noise.uniform() < a {
            let agent = noise.index(n);
            let buy = noise.coin();
            self.trade(agent, buy)
        } else {
            let i = noise.index(n);
            let j = noise.index(n);
            self.merge(i, j);
            0.0
        }
    }
}
