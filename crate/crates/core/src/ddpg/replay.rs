use std::collections::VecDeque;

use ndarray::Array2;
use rand::seq::index;

use crate::error::{Error, Result};
use crate::rng::SimRng;

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub state: Vec<f64>,
    pub action: Vec<f64>,
    pub reward: f64,
    pub next_state: Vec<f64>,
}

/// Which half of the buffer to draw from. Transitions are split by insertion
/// parity, so support and query samples are always disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partition {
    Support,
    Query,
}

impl Partition {
    fn holds(self, insertion: u64) -> bool {
        match self {
            Partition::Support => insertion % 2 == 0,
            Partition::Query => insertion % 2 == 1,
        }
    }
}

/// Row-stacked minibatch.
#[derive(Debug, Clone)]
pub struct Batch {
    pub states: Array2<f64>,
    pub actions: Array2<f64>,
    pub rewards: Vec<f64>,
    pub next_states: Array2<f64>,
}

impl Batch {
    pub fn from_transitions<'a>(items: impl IntoIterator<Item = &'a Transition>) -> Result<Self> {
        let items: Vec<&Transition> = items.into_iter().collect();
        let first = items.first().ok_or_else(|| Error::contract("empty batch"))?;
        let (s_dim, a_dim) = (first.state.len(), first.action.len());
        let rows = items.len();
        let mut states = Array2::zeros((rows, s_dim));
        let mut actions = Array2::zeros((rows, a_dim));
        let mut next_states = Array2::zeros((rows, s_dim));
        let mut rewards = Vec::with_capacity(rows);
        for (i, t) in items.iter().enumerate() {
            if t.state.len() != s_dim || t.next_state.len() != s_dim || t.action.len() != a_dim {
                return Err(Error::contract("transitions in a batch have mixed dimensions"));
            }
            states.row_mut(i).assign(&ndarray::ArrayView1::from(&t.state[..]));
            actions.row_mut(i).assign(&ndarray::ArrayView1::from(&t.action[..]));
            next_states.row_mut(i).assign(&ndarray::ArrayView1::from(&t.next_state[..]));
            rewards.push(t.reward);
        }
        Ok(Self {
            states,
            actions,
            rewards,
            next_states,
        })
    }

    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }
}

/// FIFO experience store.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    items: VecDeque<(u64, Transition)>,
    capacity: usize,
    inserted: u64,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        Self {
            items: VecDeque::with_capacity(capacity.min(1 << 16)),
            capacity,
            inserted: 0,
        }
    }

    pub fn push(&mut self, t: Transition) {
        if self.capacity == 0 {
            return;
        }
        if self.items.len() == self.capacity {
            self.items.pop_front();
        }
        self.items.push_back((self.inserted, t));
        self.inserted += 1;
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn is_ready(&self, batch_size: usize) -> bool {
        self.items.len() >= 2 * batch_size
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.items.iter().map(|(_, t)| t)
    }

    /// Indices (into the current storage) of the partition's members.
    fn members(&self, partition: Partition) -> Vec<usize> {
        self.items
            .iter()
            .enumerate()
            .filter(|(_, (ins, _))| partition.holds(*ins))
            .map(|(i, _)| i)
            .collect()
    }

    /// Uniform sample without replacement from one partition.
    pub fn sample_indices(&self, batch_size: usize, partition: Partition, rng: &mut SimRng) -> Result<Vec<usize>> {
        if !self.is_ready(batch_size) {
            return Err(Error::NotReady {
                have: self.items.len(),
                need: 2 * batch_size,
            });
        }
        let members = self.members(partition);
        // parity classes differ by at most one, so each has >= batch_size members here
        Ok(index::sample(rng, members.len(), batch_size)
            .into_iter()
            .map(|i| members[i])
            .collect())
    }

    pub fn sample_batch(&self, batch_size: usize, partition: Partition, rng: &mut SimRng) -> Result<Batch> {
        let idx = self.sample_indices(batch_size, partition, rng)?;
        Batch::from_transitions(idx.iter().map(|&i| &self.items[i].1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use std::collections::HashSet;

    fn t(i: usize) -> Transition {
        Transition {
            state: vec![i as f64],
            action: vec![0.0],
            reward: -0.5,
            next_state: vec![i as f64 + 1.0],
        }
    }

    #[test]
    fn exact_double_batch_is_partitioned_exhaustively() {
        let mut buf = ReplayBuffer::new(100);
        for i in 0..8 {
            buf.push(t(i));
        }
        let mut rng = SimRng::seed_from_u64(0);
        let s: HashSet<usize> = buf.sample_indices(4, Partition::Support, &mut rng).unwrap().into_iter().collect();
        let q: HashSet<usize> = buf.sample_indices(4, Partition::Query, &mut rng).unwrap().into_iter().collect();
        assert!(s.is_disjoint(&q));
        assert_eq!(s.union(&q).count(), 8);
    }

    #[test]
    fn not_ready_below_two_batches() {
        let mut buf = ReplayBuffer::new(1000);
        for i in 0..255 {
            buf.push(t(i));
        }
        let mut rng = SimRng::seed_from_u64(0);
        assert!(matches!(
            buf.sample_batch(128, Partition::Support, &mut rng),
            Err(Error::NotReady { have: 255, need: 256 })
        ));
        buf.push(t(255));
        let b = buf.sample_batch(128, Partition::Support, &mut rng).unwrap();
        assert_eq!(b.len(), 128);
    }

    #[test]
    fn fifo_eviction_respects_capacity() {
        let mut buf = ReplayBuffer::new(5);
        for i in 0..12 {
            buf.push(t(i));
            assert!(buf.len() <= 5);
        }
        let firsts: Vec<f64> = buf.iter().map(|x| x.state[0]).collect();
        assert_eq!(firsts, vec![7.0, 8.0, 9.0, 10.0, 11.0]);
    }

    #[test]
    fn sampling_is_reproducible() {
        let mut buf = ReplayBuffer::new(1000);
        for i in 0..300 {
            buf.push(t(i));
        }
        let a = buf.sample_indices(32, Partition::Query, &mut SimRng::seed_from_u64(4)).unwrap();
        let b = buf.sample_indices(32, Partition::Query, &mut SimRng::seed_from_u64(4)).unwrap();
        assert_eq!(a, b);
        let distinct: HashSet<_> = a.iter().collect();
        assert_eq!(distinct.len(), 32);
    }

    #[test]
    fn partitions_stay_disjoint_after_eviction() {
        let mut buf = ReplayBuffer::new(11);
        for i in 0..37 {
            buf.push(t(i));
        }
        let mut rng = SimRng::seed_from_u64(9);
        let s: HashSet<usize> = buf.sample_indices(5, Partition::Support, &mut rng).unwrap().into_iter().collect();
        let q: HashSet<usize> = buf.sample_indices(5, Partition::Query, &mut rng).unwrap().into_iter().collect();
        assert!(s.is_disjoint(&q));
    }
}
