//! Random forest of Gini-split decision trees over dense rows, with
//! bootstrap sampling, per-node feature subsampling, and accumulated
//! node-impurity decrease as the feature importance measure.

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{real, real_usize, Real};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct RandomForestParams {
    pub n_trees: usize,
    /// Features tried per split; `None` defaults to ceil(sqrt(d)).
    pub mtry: Option<usize>,
    /// `None` grows trees until purity or the leaf-size floor.
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
}

impl Default for RandomForestParams {
    fn default() -> Self {
        Self {
            n_trees: 200,
            mtry: None,
            max_depth: None,
            min_leaf: 2,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
enum Node<R: Real> {
    Leaf { p_scam: R },
    Split { feature: u32, threshold: R, left: u32, right: u32 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
struct Tree<R: Real> {
    nodes: Vec<Node<R>>,
}

impl<R: Real> Tree<R> {
    fn vote(&self, row: &[R]) -> bool {
        let mut node = 0usize;
        loop {
            match &self.nodes[node] {
                Node::Leaf { p_scam } => return *p_scam >= real(0.5),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature as usize] <= *threshold {
                        *left as usize
                    } else {
                        *right as usize
                    };
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RandomForest<R: Real> {
    trees: Vec<Tree<R>>,
    /// Total Gini decrease per feature, averaged over trees.
    importance: Vec<R>,
    n_features: usize,
    pub params: RandomForestParams,
}

fn gini(pos: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = pos as f64 / total as f64;
    2.0 * p * (1.0 - p)
}

struct TreeBuilder<'a, R: Real> {
    rows: &'a [Vec<R>],
    labels: &'a [bool],
    params: &'a RandomForestParams,
    mtry: usize,
    nodes: Vec<Node<R>>,
    importance: Vec<f64>,
}

impl<'a, R: Real> TreeBuilder<'a, R> {
    fn grow(&mut self, indices: &mut [usize], depth: usize, rng: &mut ChaCha20Rng) -> u32 {
        let total = indices.len();
        let pos = indices.iter().filter(|&&i| self.labels[i]).count();
        let node_gini = gini(pos, total);

        let depth_capped = self.params.max_depth.is_some_and(|d| depth >= d);
        if pos == 0 || pos == total || total < 2 * self.params.min_leaf || depth_capped {
            return self.leaf(pos, total);
        }

        let n_features = self.rows[0].len();
        let tried = sample(rng, n_features, self.mtry.min(n_features));
        let mut best: Option<(f64, usize, R, usize)> = None; // (improvement, feature, threshold, split_at)

        for feature in tried.iter() {
            // sort node rows by this feature's value
            let mut by_value: Vec<usize> = indices.to_vec();
            by_value.sort_by(|&a, &b| {
                self.rows[a][feature]
                    .partial_cmp(&self.rows[b][feature])
                    .unwrap()
            });
            let mut left_pos = 0usize;
            for split_at in 1..total {
                if self.labels[by_value[split_at - 1]] {
                    left_pos += 1;
                }
                let prev = self.rows[by_value[split_at - 1]][feature];
                let next = self.rows[by_value[split_at]][feature];
                if prev == next {
                    continue;
                }
                if split_at < self.params.min_leaf || total - split_at < self.params.min_leaf {
                    continue;
                }
                let left_gini = gini(left_pos, split_at);
                let right_gini = gini(pos - left_pos, total - split_at);
                let weighted = (split_at as f64 * left_gini
                    + (total - split_at) as f64 * right_gini)
                    / total as f64;
                let improvement = node_gini - weighted;
                if improvement > 1e-12 && best.is_none_or(|(imp, ..)| improvement > imp) {
                    let threshold = (prev + next) / real(2.0);
                    best = Some((improvement, feature, threshold, split_at));
                }
            }
        }

        let Some((improvement, feature, threshold, _)) = best else {
            return self.leaf(pos, total);
        };

        // unnormalized decrease in node impurity, R-style IncNodePurity
        self.importance[feature] += improvement * total as f64;

        let mid = stable_partition(indices, |&i| self.rows[i][feature] <= threshold);
        let node_slot = self.nodes.len();
        self.nodes.push(Node::Leaf { p_scam: R::zero() }); // placeholder
        let (left_slice, right_slice) = indices.split_at_mut(mid);
        let left = self.grow(left_slice, depth + 1, rng);
        let right = self.grow(right_slice, depth + 1, rng);
        self.nodes[node_slot] = Node::Split {
            feature: feature as u32,
            threshold,
            left,
            right,
        };
        node_slot as u32
    }

    fn leaf(&mut self, pos: usize, total: usize) -> u32 {
        let p = if total == 0 {
            real(0.5)
        } else {
            real_usize::<R>(pos) / real_usize(total)
        };
        self.nodes.push(Node::Leaf { p_scam: p });
        (self.nodes.len() - 1) as u32
    }
}

/// Stable partition: reorders `indices` so items satisfying the predicate
/// come first; returns the boundary.
fn stable_partition<F: Fn(&usize) -> bool>(indices: &mut [usize], pred: F) -> usize {
    let mut sorted: Vec<usize> = Vec::with_capacity(indices.len());
    sorted.extend(indices.iter().copied().filter(|i| pred(i)));
    let mid = sorted.len();
    sorted.extend(indices.iter().copied().filter(|i| !pred(i)));
    indices.copy_from_slice(&sorted);
    mid
}

impl<R: Real> RandomForest<R> {
    /// Train on complete-case dense rows; labels true = scam. Deterministic
    /// per seed: every tree derives its own RNG from the master seed.
    pub fn train(
        rows: &[Vec<R>],
        labels: &[bool],
        params: RandomForestParams,
        seed: u64,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyTraining);
        }
        assert_eq!(rows.len(), labels.len());
        let n_features = rows[0].len();
        let mtry = params
            .mtry
            .unwrap_or_else(|| (n_features as f64).sqrt().ceil() as usize)
            .max(1);

        let mut seeder = ChaCha20Rng::seed_from_u64(seed);
        let tree_seeds: Vec<u64> = (0..params.n_trees).map(|_| seeder.gen()).collect();

        let built: Vec<(Tree<R>, Vec<f64>)> = tree_seeds
            .par_iter()
            .map(|&tree_seed| {
                let mut rng = ChaCha20Rng::seed_from_u64(tree_seed);
                let n = rows.len();
                let mut bootstrap: Vec<usize> =
                    (0..n).map(|_| rng.gen_range(0..n)).collect();
                let mut builder = TreeBuilder {
                    rows,
                    labels,
                    params: &params,
                    mtry,
                    nodes: Vec::new(),
                    importance: vec![0.0; n_features],
                };
                let root = builder.grow(&mut bootstrap, 0, &mut rng);
                debug_assert_eq!(root, 0, "root is always the first node slot");
                (
                    Tree {
                        nodes: builder.nodes,
                    },
                    builder.importance,
                )
            })
            .collect();

        let mut importance = vec![0.0f64; n_features];
        let mut trees = Vec::with_capacity(params.n_trees);
        for (tree, tree_importance) in built {
            trees.push(tree);
            for (total, inc) in importance.iter_mut().zip(&tree_importance) {
                *total += inc;
            }
        }
        let importance = importance
            .iter()
            .map(|&x| real(x / params.n_trees as f64))
            .collect();

        Ok(Self {
            trees,
            importance,
            n_features,
            params,
        })
    }

    /// Fraction of trees voting scam.
    pub fn vote_fraction(&self, row: &[R]) -> R {
        let votes = self.trees.iter().filter(|t| t.vote(row)).count();
        real_usize::<R>(votes) / real_usize(self.trees.len())
    }

    pub fn importance(&self) -> &[R] {
        &self.importance
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }
}
