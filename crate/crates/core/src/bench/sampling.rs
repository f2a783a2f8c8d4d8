use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Topology, VertexId};

/// `n` seeded start/goal pairs with `start != goal` and the goal reachable
/// from the start. Unreachable draws are redrawn up to a fixed budget.
pub fn sample_pairs(topo: &Topology, n: usize, seed: u64) -> Result<Vec<(VertexId, VertexId)>> {
    let v = topo.vertex_count();
    if v < 2 {
        return Err(Error::Sampling(format!("graph has {v} vertices, need at least 2")));
    }
    let components = topo.is_symmetric().then(|| topo.components().0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = 100 * n + 100;
    let mut pairs = Vec::with_capacity(n);
    let mut draws = 0;
    while pairs.len() < n {
        if draws == budget {
            return Err(Error::Sampling(format!(
                "found {} connected pairs after {budget} draws",
                pairs.len()
            )));
        }
        draws += 1;
        let s = rng.gen_range(0..v);
        let t = rng.gen_range(0..v);
        if s == t {
            continue;
        }
        let connected = match &components {
            Some(labels) => labels[s] == labels[t],
            None => topo.reachable_from(VertexId(s as u32))[t],
        };
        if connected {
            pairs.push((VertexId(s as u32), VertexId(t as u32)));
        }
    }
    Ok(pairs)
}
