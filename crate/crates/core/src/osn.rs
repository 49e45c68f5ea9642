//! Disclosure labels and behavioral-analog features from follow graphs.
//!
//! A request `u -> v` is accepted when `v` follows `u` back. The features
//! per request are the requester's trustworthiness, the receiver's follow
//! tendency, the sensitivity of the receiver's profile settings and six
//! measures of overlap between the two users' networks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::data::{Column, FactorGroup, FeatureMatrix, OsnGraph, Platform, RequestRecord, Value};
use crate::error::{Error, Result};

/// Emits one record per friend request.
///
/// Twitter: every edge among non-verified users is a request, labelled by
/// whether the reverse edge exists. Both directions of a mutual pair are
/// emitted and flagged, since only one of them was the real request.
///
/// Google+: the earlier-stage direction of a pair is the request and a
/// reverse edge at the same or a later stage is the acceptance. Same-stage
/// pairs are emitted once (lower id as requester) and flagged.
pub fn derive_labels(graph: &OsnGraph) -> Result<Vec<RequestRecord>> {
    let mut out = Vec::new();
    match graph.platform() {
        Platform::Twitter => {
            for (u, v) in graph.edges() {
                if graph.user(u).verified || graph.user(v).verified {
                    continue;
                }
                let mutual = graph.has_edge(v, u);
                out.push(RequestRecord {
                    requester: u,
                    receiver: v,
                    label: mutual,
                    spurious_risk: mutual,
                });
            }
        }
        Platform::GooglePlus => {
            for (u, v) in graph.edges() {
                let stage = graph.stage(u, v).ok_or_else(|| {
                    Error::invalid(format!(
                        "edge {} -> {} has no stage",
                        graph.user(u).id,
                        graph.user(v).id
                    ))
                })?;
                let record = match graph.stage(v, u) {
                    None => Some((false, false)),
                    Some(back) if back > stage => Some((true, false)),
                    Some(back) if back < stage => None,
                    Some(_) => (u < v).then_some((true, true)),
                };
                if let Some((label, spurious_risk)) = record {
                    out.push(RequestRecord {
                        requester: u,
                        receiver: v,
                        label,
                        spurious_risk,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Share of a user's connections that are people they follow.
/// A user with no connections scores 0.5.
pub fn follow_tendency(following_count: usize, follower_count: usize) -> f64 {
    let total = following_count + follower_count;
    if total == 0 {
        0.5
    } else {
        following_count as f64 / total as f64
    }
}

/// Share of a user's connections that are followers.
/// A user with no connections scores 0.5.
pub fn trustworthiness(following_count: usize, follower_count: usize) -> f64 {
    let total = following_count + follower_count;
    if total == 0 {
        0.5
    } else {
        follower_count as f64 / total as f64
    }
}

/// Population distribution of every profile item's settings, add-one
/// smoothed so every setting in the vocabulary has positive probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityTable {
    items: BTreeMap<String, BTreeMap<String, f64>>,
}

impl SensitivityTable {
    pub fn build(graph: &OsnGraph) -> Self {
        let mut items = BTreeMap::new();
        for item in graph.platform().profile_items() {
            let counts: Vec<usize> = item
                .values
                .iter()
                .map(|value| {
                    graph
                        .users()
                        .iter()
                        .filter(|u| u.profile.get(item.name).map(String::as_str) == Some(value))
                        .count()
                })
                .collect();
            items.insert(item.name.to_string(), smoothed(item.values, &counts));
        }
        SensitivityTable { items }
    }

    /// Table for arbitrary items from raw setting counts.
    pub fn from_counts(counts: &[(&str, &[(&str, usize)])]) -> Self {
        let items = counts
            .iter()
            .map(|(item, settings)| {
                let values: Vec<&str> = settings.iter().map(|s| s.0).collect();
                let n: Vec<usize> = settings.iter().map(|s| s.1).collect();
                (item.to_string(), smoothed(&values, &n))
            })
            .collect();
        SensitivityTable { items }
    }

    /// Table from already-normalized probabilities.
    pub fn from_probabilities(probs: &[(&str, &[(&str, f64)])]) -> Result<Self> {
        let mut items = BTreeMap::new();
        for (item, settings) in probs {
            let sum: f64 = settings.iter().map(|s| s.1).sum();
            if (sum - 1.0).abs() > 1e-9 || settings.iter().any(|s| !(s.1 > 0.0 && s.1 <= 1.0)) {
                return Err(Error::invalid(format!(
                    "probabilities for '{item}' must be positive and sum to 1"
                )));
            }
            items.insert(
                item.to_string(),
                settings.iter().map(|(v, p)| (v.to_string(), *p)).collect(),
            );
        }
        Ok(SensitivityTable { items })
    }

    pub fn probability(&self, item: &str, value: &str) -> Result<f64> {
        self.items
            .get(item)
            .and_then(|settings| settings.get(value))
            .copied()
            .ok_or_else(|| Error::Vocabulary {
                field: item.to_string(),
                value: value.to_string(),
            })
    }

    pub fn item_names(&self) -> impl Iterator<Item = &str> {
        self.items.keys().map(String::as_str)
    }
}

fn smoothed(values: &[&str], counts: &[usize]) -> BTreeMap<String, f64> {
    let total: usize = counts.iter().sum();
    let denom = (total + values.len()) as f64;
    values
        .iter()
        .zip(counts)
        .map(|(v, &c)| (v.to_string(), (c + 1) as f64 / denom))
        .collect()
}

/// Sensitivity score of a setting: the inverse of how common it is.
pub fn profile_sensitivity(table: &SensitivityTable, item: &str, value: &str) -> Result<f64> {
    Ok(1.0 / table.probability(item, value)?)
}

/// Network overlap between requester `u` and receiver `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapFeatures {
    pub jaccard_following: f64,
    pub jaccard_follower: f64,
    pub com_following_u: f64,
    pub com_follower_u: f64,
    pub com_following_v: f64,
    pub com_follower_v: f64,
}

impl OverlapFeatures {
    pub const NAMES: [&'static str; 6] = [
        "jaccard_following",
        "jaccard_follower",
        "com_following_u",
        "com_follower_u",
        "com_following_v",
        "com_follower_v",
    ];

    pub fn to_array(self) -> [f64; 6] {
        [
            self.jaccard_following,
            self.jaccard_follower,
            self.com_following_u,
            self.com_follower_u,
            self.com_following_v,
            self.com_follower_v,
        ]
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn check_pair(graph: &OsnGraph, u: usize, v: usize) -> Result<()> {
    if u == v {
        return Err(Error::invalid("overlap of a user with itself"));
    }
    if u >= graph.user_count() || v >= graph.user_count() {
        return Err(Error::invalid("user index out of range"));
    }
    Ok(())
}

fn overlap_from_sizes(
    common_following: usize,
    (n_fu, n_fv): (usize, usize),
    common_follower: usize,
    (n_ru, n_rv): (usize, usize),
) -> OverlapFeatures {
    OverlapFeatures {
        jaccard_following: ratio(common_following, n_fu + n_fv - common_following),
        jaccard_follower: ratio(common_follower, n_ru + n_rv - common_follower),
        com_following_u: ratio(common_following, n_fu),
        com_follower_u: ratio(common_follower, n_ru),
        com_following_v: ratio(common_following, n_fv),
        com_follower_v: ratio(common_follower, n_rv),
    }
}

pub fn overlap_features(graph: &OsnGraph, u: usize, v: usize) -> Result<OverlapFeatures> {
    check_pair(graph, u, v)?;
    let (fu, fv) = (graph.following(u), graph.following(v));
    let (ru, rv) = (graph.followers(u), graph.followers(v));
    Ok(overlap_from_sizes(
        fu.intersection(fv).count(),
        (fu.len(), fv.len()),
        ru.intersection(rv).count(),
        (ru.len(), rv.len()),
    ))
}

/// Overlap of `u` and `v` on the snapshot of `stage`: only edges whose
/// stage is at most `stage` count. `None` uses every edge.
pub fn snapshot_overlap_features(
    graph: &OsnGraph,
    u: usize,
    v: usize,
    stage: Option<u32>,
) -> Result<OverlapFeatures> {
    check_pair(graph, u, v)?;
    let Some(s) = stage else {
        return overlap_features(graph, u, v);
    };
    let view = Snapshot { graph, stage: s };
    let (fu, fv) = (view.following(u), view.following(v));
    let (ru, rv) = (view.followers(u), view.followers(v));
    Ok(overlap_from_sizes(
        fu.intersection(&fv).count(),
        (fu.len(), fv.len()),
        ru.intersection(&rv).count(),
        (ru.len(), rv.len()),
    ))
}

/// The graph as of one stage.
struct Snapshot<'a> {
    graph: &'a OsnGraph,
    stage: u32,
}

impl Snapshot<'_> {
    fn visible(&self, from: usize, to: usize) -> bool {
        self.graph.stage(from, to).is_some_and(|t| t <= self.stage)
    }

    fn following(&self, u: usize) -> BTreeSet<usize> {
        self.graph
            .following(u)
            .iter()
            .copied()
            .filter(|&w| self.visible(u, w))
            .collect()
    }

    fn followers(&self, u: usize) -> BTreeSet<usize> {
        self.graph
            .followers(u)
            .iter()
            .copied()
            .filter(|&w| self.visible(w, u))
            .collect()
    }
}

/// (following, follower) counts of `u`, on the snapshot of `stage` if given.
fn degree_at(graph: &OsnGraph, u: usize, stage: Option<u32>) -> (usize, usize) {
    match stage {
        None => (graph.following_count(u), graph.follower_count(u)),
        Some(s) => {
            let view = Snapshot { graph, stage: s };
            (view.following(u).len(), view.followers(u).len())
        }
    }
}

/// Feature columns for a platform, grouped by factor.
pub fn osn_columns(platform: Platform) -> Vec<Column> {
    let mut cols = vec![
        Column::numeric("trustworthiness_requester", FactorGroup::Trustworthiness),
        Column::numeric("follow_tendency_receiver", FactorGroup::Tendency),
    ];
    cols.extend(
        platform
            .profile_items()
            .iter()
            .map(|item| Column::numeric(format!("S({})", item.name), FactorGroup::Sensitivity)),
    );
    cols.extend(
        OverlapFeatures::NAMES
            .iter()
            .map(|n| Column::numeric(*n, FactorGroup::Appropriateness)),
    );
    cols
}

/// Requests derived from a graph together with their feature rows.
#[derive(Debug, Clone)]
pub struct OsnDataset {
    pub records: Vec<RequestRecord>,
    pub matrix: FeatureMatrix,
}

pub fn build_osn_features(graph: &OsnGraph) -> Result<OsnDataset> {
    let records = derive_labels(graph)?;
    let table = SensitivityTable::build(graph);
    let items = graph.platform().profile_items();
    let mut matrix = FeatureMatrix::new(osn_columns(graph.platform()));
    for r in &records {
        let (u, v) = (r.requester, r.receiver);
        let mut row = Vec::with_capacity(matrix.n_cols());
        // Google+ requests are described as of their own stage, so later
        // reciprocations (the label among them) never reach the features.
        // Twitter graphs carry no stages and are used as given.
        let stage = graph.stage(u, v);
        let (following_u, follower_u) = degree_at(graph, u, stage);
        let (following_v, follower_v) = degree_at(graph, v, stage);
        row.push(Value::Num(trustworthiness(following_u, follower_u)));
        row.push(Value::Num(follow_tendency(following_v, follower_v)));
        let profile = &graph.user(v).profile;
        for item in items {
            let value = profile.get(item.name).ok_or_else(|| Error::Vocabulary {
                field: item.name.to_string(),
                value: String::new(),
            })?;
            row.push(Value::Num(profile_sensitivity(&table, item.name, value)?));
        }
        row.extend(
            snapshot_overlap_features(graph, u, v, stage)?
                .to_array()
                .into_iter()
                .map(Value::Num),
        );
        matrix.push_row(row, r.label)?;
    }
    Ok(OsnDataset { records, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Edge, OsnUser};

    fn user(id: &str, platform: Platform) -> OsnUser {
        let profile = platform
            .profile_items()
            .iter()
            .map(|i| (i.name.to_string(), i.values[0].to_string()))
            .collect();
        OsnUser {
            id: id.into(),
            profile,
            verified: false,
        }
    }

    fn graph(platform: Platform, ids: &[&str], edges: &[(&str, &str, Option<u32>)]) -> OsnGraph {
        OsnGraph::from_parts(
            platform,
            ids.iter().map(|id| user(id, platform)).collect(),
            edges
                .iter()
                .map(|(f, t, s)| Edge {
                    from: f.to_string(),
                    to: t.to_string(),
                    stage: *s,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn twitter_one_way_edge_is_rejected_request() {
        let g = graph(Platform::Twitter, &["u", "v"], &[("u", "v", None)]);
        let recs = derive_labels(&g).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].requester, g.index_of("u").unwrap());
        assert!(!recs[0].label);
        assert!(!recs[0].spurious_risk);
    }

    #[test]
    fn twitter_mutual_pair_gives_two_flagged_records() {
        let g = graph(
            Platform::Twitter,
            &["u", "v"],
            &[("u", "v", None), ("v", "u", None)],
        );
        let recs = derive_labels(&g).unwrap();
        assert_eq!(recs.len(), 2);
        assert!(recs.iter().all(|r| r.label && r.spurious_risk));
    }

    #[test]
    fn twitter_drops_verified_users() {
        let mut users: Vec<OsnUser> = ["a", "b", "c"]
            .iter()
            .map(|id| user(id, Platform::Twitter))
            .collect();
        users[2].verified = true;
        let edges = [("a", "b"), ("a", "c"), ("c", "b")]
            .iter()
            .map(|(f, t)| Edge {
                from: f.to_string(),
                to: t.to_string(),
                stage: None,
            })
            .collect();
        let g = OsnGraph::from_parts(Platform::Twitter, users, edges).unwrap();
        let recs = derive_labels(&g).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!((recs[0].requester, recs[0].receiver), (0, 1));
    }

    #[test]
    fn googleplus_later_reciprocation_is_one_accepted_request() {
        let g = graph(
            Platform::GooglePlus,
            &["u", "v"],
            &[("u", "v", Some(0)), ("v", "u", Some(1))],
        );
        let recs = derive_labels(&g).unwrap();
        assert_eq!(recs.len(), 1);
        let r = recs[0];
        assert_eq!(
            (r.requester, r.receiver),
            (g.index_of("u").unwrap(), g.index_of("v").unwrap())
        );
        assert!(r.label);
        assert!(!r.spurious_risk);

        // Request sent later by the lexicographically smaller user.
        let g = graph(
            Platform::GooglePlus,
            &["a", "b"],
            &[("a", "b", Some(1)), ("b", "a", Some(0))],
        );
        let recs = derive_labels(&g).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].requester, g.index_of("b").unwrap());
    }

    #[test]
    fn googleplus_same_stage_pair_is_emitted_once_and_flagged() {
        let g = graph(
            Platform::GooglePlus,
            &["a", "b"],
            &[("a", "b", Some(0)), ("b", "a", Some(0))],
        );
        let recs = derive_labels(&g).unwrap();
        assert_eq!(recs.len(), 1);
        assert!(recs[0].label && recs[0].spurious_risk);
    }

    #[test]
    fn tendency_and_trust_formulas() {
        assert!((follow_tendency(30, 70) - 0.3).abs() < 1e-12);
        assert_eq!(follow_tendency(0, 0), 0.5);
        assert_eq!(follow_tendency(100, 0), 1.0);
        assert!((trustworthiness(30, 70) - 0.7).abs() < 1e-12);
        assert_eq!(trustworthiness(0, 0), 0.5);
        assert_eq!(trustworthiness(0, 50), 1.0);
    }

    #[test]
    fn sensitivity_scores() {
        let t = SensitivityTable::from_probabilities(&[(
            "URL",
            &[("blank", 0.5), ("personal", 0.25), ("other", 0.25)],
        )])
        .unwrap();
        assert!((profile_sensitivity(&t, "URL", "personal").unwrap() - 4.0).abs() < 1e-12);
        assert!(matches!(
            profile_sensitivity(&t, "URL", "mine"),
            Err(Error::Vocabulary { .. })
        ));

        let t = SensitivityTable::from_counts(&[("GEO", &[("0", 50), ("1", 50)])]);
        assert_eq!(profile_sensitivity(&t, "GEO", "0").unwrap(), 2.0);
        assert_eq!(profile_sensitivity(&t, "GEO", "1").unwrap(), 2.0);
    }

    #[test]
    fn universal_setting_has_minimum_score() {
        // Single-setting vocabulary: the only value is held by everyone.
        let t = SensitivityTable::from_counts(&[("only", &[("x", 40)])]);
        assert_eq!(profile_sensitivity(&t, "only", "x").unwrap(), 1.0);

        // With add-one smoothing over a two-value vocabulary the universal
        // value scores (n + 2) / (n + 1), the smallest attainable score.
        let t = SensitivityTable::from_counts(&[("GEO", &[("0", 98), ("1", 0)])]);
        let s = profile_sensitivity(&t, "GEO", "0").unwrap();
        assert!((s - 100.0 / 99.0).abs() < 1e-12);
        assert!(s < profile_sensitivity(&t, "GEO", "1").unwrap());
    }

    #[test]
    fn built_table_is_normalized_and_positive() {
        let g = graph(Platform::Twitter, &["a", "b", "c"], &[]);
        let t = SensitivityTable::build(&g);
        for item in Platform::Twitter.profile_items() {
            let total: f64 = item
                .values
                .iter()
                .map(|v| t.probability(item.name, v).unwrap())
                .sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
        // All three users hold "blank": (3 + 1) / (3 + 3).
        assert!((t.probability("URL", "blank").unwrap() - 4.0 / 6.0).abs() < 1e-12);
        assert!((t.probability("URL", "other").unwrap() - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_examples() {
        let g = graph(
            Platform::Twitter,
            &["u", "v", "a", "b", "c", "d"],
            &[
                ("u", "a", None),
                ("u", "b", None),
                ("u", "c", None),
                ("v", "b", None),
                ("v", "c", None),
                ("v", "d", None),
            ],
        );
        let (u, v) = (g.index_of("u").unwrap(), g.index_of("v").unwrap());
        let o = overlap_features(&g, u, v).unwrap();
        assert!((o.jaccard_following - 0.5).abs() < 1e-12);
        assert!((o.com_following_u - 2.0 / 3.0).abs() < 1e-12);
        assert!((o.com_following_v - 2.0 / 3.0).abs() < 1e-12);
        // Nobody follows u or v: empty union and zero denominators give 0.
        assert_eq!(o.jaccard_follower, 0.0);
        assert_eq!(o.com_follower_u, 0.0);
        assert!(overlap_features(&g, u, u).is_err());
    }

    #[test]
    fn identical_and_disjoint_sets() {
        let g = graph(
            Platform::Twitter,
            &["u", "v", "a", "b", "x", "y"],
            &[
                ("u", "a", None),
                ("u", "b", None),
                ("v", "a", None),
                ("v", "b", None),
                ("x", "u", None),
                ("y", "v", None),
            ],
        );
        let o = overlap_features(&g, g.index_of("u").unwrap(), g.index_of("v").unwrap()).unwrap();
        assert_eq!(o.jaccard_following, 1.0);
        assert_eq!(o.jaccard_follower, 0.0);
    }

    #[test]
    fn later_stages_do_not_reach_googleplus_features() {
        let ids = ["u", "v", "a", "b", "x"];
        let mut edges = vec![
            ("u", "v", Some(0)),
            ("u", "a", Some(0)),
            ("v", "a", Some(0)),
            ("x", "u", Some(0)),
            ("x", "v", Some(0)),
            ("v", "b", Some(0)),
            ("b", "u", Some(0)),
        ];
        let without = graph(Platform::GooglePlus, &ids, &edges);
        edges.push(("v", "u", Some(1)));
        let with = graph(Platform::GooglePlus, &ids, &edges);
        let (u, v) = (with.index_of("u").unwrap(), with.index_of("v").unwrap());

        let row_of = |g: &OsnGraph| {
            let ds = build_osn_features(g).unwrap();
            let i = ds
                .records
                .iter()
                .position(|r| r.requester == u && r.receiver == v)
                .unwrap();
            (ds.matrix.row(i).to_vec(), ds.records[i].label)
        };
        let (accepted, l1) = row_of(&with);
        let (rejected, l0) = row_of(&without);
        assert!(l1 && !l0);
        assert_eq!(accepted, rejected);
        assert_eq!(
            snapshot_overlap_features(&with, u, v, Some(0)).unwrap(),
            overlap_features(&without, u, v).unwrap()
        );
        assert_ne!(
            overlap_features(&with, u, v).unwrap(),
            overlap_features(&without, u, v).unwrap()
        );
    }

    #[test]
    fn feature_column_counts() {
        assert_eq!(osn_columns(Platform::Twitter).len(), 11);
        assert_eq!(osn_columns(Platform::GooglePlus).len(), 12);
        let g = graph(Platform::Twitter, &["u", "v"], &[("u", "v", None)]);
        let ds = build_osn_features(&g).unwrap();
        let dropped = ds
            .matrix
            .without_groups(&[FactorGroup::Sensitivity])
            .unwrap();
        assert_eq!(dropped.n_cols(), 8);
        assert!(dropped.columns().iter().all(|c| !c.name.starts_with("S(")));
    }
}
