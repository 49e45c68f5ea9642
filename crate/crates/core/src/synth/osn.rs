//! Synthetic follow graphs.
//!
//! Users belong to communities and issue follow requests by preferential
//! attachment (mostly inside their own community), which gives a skewed
//! in-degree distribution and community-driven network overlap. Each
//! request is then reciprocated according to the planted rule.

use std::collections::{BTreeSet, HashSet};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{LogNormal, Poisson};
use serde::{Deserialize, Serialize};

use super::{standardize, PlantedRule};
use crate::data::{Edge, OsnGraph, OsnUser, Platform};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OsnGenConfig {
    pub n_users: usize,
    /// Mean number of requests issued per user.
    pub mean_degree: f64,
    pub platform: Platform,
    /// Number of communities; 0 picks one per 250 users.
    pub communities: usize,
    /// Probability that a request targets the requester's own community.
    pub within_community: f64,
    /// Share of users, by in-degree, flagged as verified (Twitter only).
    pub verified_fraction: f64,
    /// Setting probabilities per profile item, in the platform's item order.
    pub profile_marginals: Vec<Vec<f64>>,
}

impl OsnGenConfig {
    pub fn new(platform: Platform, n_users: usize, mean_degree: f64) -> Self {
        let profile_marginals = match platform {
            Platform::Twitter => vec![vec![0.55, 0.25, 0.20], vec![0.7, 0.3], vec![0.9, 0.1]],
            Platform::GooglePlus => vec![
                vec![0.6, 0.4],
                vec![0.7, 0.3],
                vec![0.5, 0.5],
                vec![0.55, 0.45],
            ],
        };
        OsnGenConfig {
            n_users,
            mean_degree,
            platform,
            communities: 0,
            within_community: 0.8,
            verified_fraction: 0.0,
            profile_marginals,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_users < 10 {
            return Err(Error::invalid(format!(
                "need at least 10 users, got {}",
                self.n_users
            )));
        }
        if !(self.mean_degree > 0.0 && self.mean_degree.is_finite()) {
            return Err(Error::invalid("mean degree must be positive"));
        }
        if !(0.0..=1.0).contains(&self.within_community) {
            return Err(Error::invalid(
                "within-community probability must be in [0, 1]",
            ));
        }
        if !(0.0..=1.0).contains(&self.verified_fraction) {
            return Err(Error::invalid("verified fraction must be in [0, 1]"));
        }
        let items = self.platform.profile_items();
        if self.profile_marginals.len() != items.len()
            || items
                .iter()
                .zip(&self.profile_marginals)
                .any(|(item, p)| p.len() != item.values.len())
        {
            return Err(Error::invalid(format!(
                "profile marginals do not match the {} profile items",
                self.platform
            )));
        }
        for p in &self.profile_marginals {
            if p.iter().any(|x| !(*x >= 0.0 && x.is_finite()))
                || (p.iter().sum::<f64>() - 1.0).abs() > 1e-9
            {
                return Err(Error::invalid(
                    "each profile marginal must be a probability vector",
                ));
            }
        }
        Ok(())
    }
}

/// One generated request and how its label came about.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrueRequest {
    pub requester: String,
    pub receiver: String,
    /// Unstandardized true tendency, sensitivity, trustworthiness and
    /// appropriateness.
    pub analogs: [f64; 4],
    pub probability: f64,
    pub decision: bool,
    pub flipped: bool,
    pub reciprocated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OsnTruth {
    pub seed: u64,
    pub rule: PlantedRule,
    pub config: OsnGenConfig,
    pub requests: Vec<TrueRequest>,
}

fn jaccard(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

pub fn generate_osn_graph(
    config: &OsnGenConfig,
    rule: &PlantedRule,
    seed: u64,
) -> Result<(OsnGraph, OsnTruth)> {
    config.validate()?;
    rule.validate()?;
    let n = config.n_users;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = (n - 1).to_string().len();
    let id = |i: usize| format!("u{i:0width$}");

    let n_comm = if config.communities > 0 {
        config.communities
    } else {
        (n / 250).max(2)
    };
    let community: Vec<usize> = (0..n).map(|_| rng.random_range(0..n_comm)).collect();

    let items = config.platform.profile_items();
    let samplers = config
        .profile_marginals
        .iter()
        .map(|p| {
            WeightedIndex::new(p).map_err(|e| Error::invalid(format!("profile marginal: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let profiles: Vec<Vec<usize>> = (0..n)
        .map(|_| samplers.iter().map(|s| s.sample(&mut rng)).collect())
        .collect();

    // Requests by preferential attachment: each pool holds a target once
    // per incoming request plus once for itself.
    let activity = LogNormal::new(-0.32, 0.8).expect("valid log-normal");
    let mut pools: Vec<Vec<usize>> = vec![Vec::new(); n_comm];
    let mut global: Vec<usize> = (0..n).collect();
    for i in 0..n {
        pools[community[i]].push(i);
    }
    let mut order: Vec<usize> = (0..n).collect();
    rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
    let mut pairs: HashSet<(usize, usize)> = HashSet::new();
    let mut requests: Vec<(usize, usize)> = Vec::new();
    for &u in &order {
        let lambda = config.mean_degree * activity.sample(&mut rng);
        let k = Poisson::new(lambda.max(1e-9))
            .map(|p| p.sample(&mut rng) as usize)
            .unwrap_or(0)
            .min(n - 1);
        for _ in 0..k {
            for _attempt in 0..20 {
                let pool = if rng.random::<f64>() < config.within_community {
                    &pools[community[u]]
                } else {
                    &global
                };
                let v = pool[rng.random_range(0..pool.len())];
                let key = (u.min(v), u.max(v));
                if v == u || pairs.contains(&key) {
                    continue;
                }
                pairs.insert(key);
                requests.push((u, v));
                pools[community[v]].push(v);
                global.push(v);
                break;
            }
        }
    }

    let mut out_sets = vec![BTreeSet::new(); n];
    let mut in_sets = vec![BTreeSet::new(); n];
    for &(u, v) in &requests {
        out_sets[u].insert(v);
        in_sets[v].insert(u);
    }
    let ratio = |a: usize, b: usize| {
        if a + b == 0 {
            0.5
        } else {
            a as f64 / (a + b) as f64
        }
    };
    let raw: Vec<[f64; 4]> = requests
        .iter()
        .map(|&(u, v)| {
            let tendency = ratio(out_sets[v].len(), in_sets[v].len());
            let sensitivity = profiles[v]
                .iter()
                .zip(&config.profile_marginals)
                .map(|(&k, p)| -p[k].ln())
                .sum::<f64>()
                / items.len() as f64;
            let trust = ratio(in_sets[u].len(), out_sets[u].len());
            let appropriateness =
                0.5 * (jaccard(&out_sets[u], &out_sets[v]) + jaccard(&in_sets[u], &in_sets[v]));
            [tendency, sensitivity, trust, appropriateness]
        })
        .collect();
    let z = standardize(&raw);

    let staged = config.platform == Platform::GooglePlus;
    let mut edges = Vec::with_capacity(requests.len() * 2);
    let mut truth = Vec::with_capacity(requests.len());
    for (j, &(u, v)) in requests.iter().enumerate() {
        let probability = rule.probability(z[j]);
        let decision = rng.random::<f64>() < probability;
        let flipped = rng.random::<f64>() < rule.noise;
        let reciprocated = decision != flipped;
        edges.push(Edge {
            from: id(u),
            to: id(v),
            stage: staged.then_some(0),
        });
        if reciprocated {
            let stage = if rule.obfuscate_direction { 0 } else { 1 };
            edges.push(Edge {
                from: id(v),
                to: id(u),
                stage: staged.then_some(stage),
            });
        }
        truth.push(TrueRequest {
            requester: id(u),
            receiver: id(v),
            analogs: raw[j],
            probability,
            decision,
            flipped,
            reciprocated,
        });
    }

    let mut verified = vec![false; n];
    if config.platform == Platform::Twitter && config.verified_fraction > 0.0 {
        let mut by_in: Vec<usize> = (0..n).collect();
        by_in.sort_by(|&a, &b| in_sets[b].len().cmp(&in_sets[a].len()).then(a.cmp(&b)));
        let k = (config.verified_fraction * n as f64).round() as usize;
        for &i in &by_in[..k.min(n)] {
            verified[i] = true;
        }
    }
    let users = (0..n)
        .map(|i| OsnUser {
            id: id(i),
            profile: items
                .iter()
                .zip(&profiles[i])
                .map(|(item, &k)| (item.name.to_string(), item.values[k].to_string()))
                .collect(),
            verified: verified[i],
        })
        .collect();

    let graph = OsnGraph::from_parts(config.platform, users, edges)?;
    Ok((
        graph,
        OsnTruth {
            seed,
            rule: *rule,
            config: config.clone(),
            requests: truth,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::osn::derive_labels;

    #[test]
    fn symmetric_rule_gives_even_base_rate() {
        let cfg = OsnGenConfig::new(Platform::GooglePlus, 2000, 5.0);
        let rule = PlantedRule::new(0.0, [0.0; 4], 0.0);
        let (graph, truth) = generate_osn_graph(&cfg, &rule, 3).unwrap();
        let records = derive_labels(&graph).unwrap();
        assert_eq!(records.len(), truth.requests.len());
        let rate = records.iter().filter(|r| r.label).count() as f64 / records.len() as f64;
        assert!((rate - 0.5).abs() < 0.02, "{rate}");
        assert!(records.iter().all(|r| !r.spurious_risk));
    }

    #[test]
    fn deterministic_output() {
        let cfg = OsnGenConfig::new(Platform::Twitter, 200, 4.0);
        let rule = PlantedRule::new(0.2, [1.0, -1.0, 2.0, 0.5], 0.1);
        let (a, _) = generate_osn_graph(&cfg, &rule, 9).unwrap();
        let (b, _) = generate_osn_graph(&cfg, &rule, 9).unwrap();
        assert_eq!(a.to_jsonl(), b.to_jsonl());
        let (c, _) = generate_osn_graph(&cfg, &rule, 10).unwrap();
        assert_ne!(a.to_jsonl(), c.to_jsonl());
    }

    #[test]
    fn twitter_mutual_pairs_give_two_positive_records() {
        let cfg = OsnGenConfig::new(Platform::Twitter, 300, 4.0);
        let rule = PlantedRule::new(0.0, [0.0; 4], 0.0);
        let (graph, truth) = generate_osn_graph(&cfg, &rule, 4).unwrap();
        let records = derive_labels(&graph).unwrap();
        let accepted = truth.requests.iter().filter(|t| t.reciprocated).count();
        assert_eq!(records.iter().filter(|r| r.label).count(), 2 * accepted);
        assert_eq!(records.len(), truth.requests.len() + accepted);
    }

    #[test]
    fn rejects_tiny_graphs() {
        let cfg = OsnGenConfig::new(Platform::Twitter, 5, 2.0);
        assert!(generate_osn_graph(&cfg, &PlantedRule::new(0.0, [0.0; 4], 0.0), 1).is_err());
    }
}
