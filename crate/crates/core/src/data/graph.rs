//! Directed follow graphs with per-user profile settings.
//!
//! Graphs are stored as JSON-Lines, one object per line:
//!
//! ```text
//! {"kind":"user","id":"a","profile":{"URL":"blank","GEO":"0","Protected":"1"},"verified":false}
//! {"kind":"edge","from":"a","to":"b"}
//! {"kind":"edge","from":"a","to":"b","stage":0}     (googleplus only)
//! ```
//!
//! Users are kept sorted by id, so two files holding the same users and
//! edges in any line order load into equal graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Platform {
    Twitter,
    #[serde(rename = "googleplus")]
    GooglePlus,
}

/// A profile item and the closed set of settings it may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfileItem {
    pub name: &'static str,
    pub values: &'static [&'static str],
}

const BINARY: &[&str] = &["0", "1"];

const TWITTER_ITEMS: &[ProfileItem] = &[
    ProfileItem {
        name: "URL",
        values: &["blank", "personal", "other"],
    },
    ProfileItem {
        name: "GEO",
        values: BINARY,
    },
    ProfileItem {
        name: "Protected",
        values: BINARY,
    },
];

const GOOGLEPLUS_ITEMS: &[ProfileItem] = &[
    ProfileItem {
        name: "Employer",
        values: BINARY,
    },
    ProfileItem {
        name: "Major",
        values: BINARY,
    },
    ProfileItem {
        name: "School",
        values: BINARY,
    },
    ProfileItem {
        name: "Places",
        values: BINARY,
    },
];

impl Platform {
    pub fn as_str(self) -> &'static str {
        match self {
            Platform::Twitter => "twitter",
            Platform::GooglePlus => "googleplus",
        }
    }

    pub fn profile_items(self) -> &'static [ProfileItem] {
        match self {
            Platform::Twitter => TWITTER_ITEMS,
            Platform::GooglePlus => GOOGLEPLUS_ITEMS,
        }
    }

    pub fn profile_item(self, name: &str) -> Option<&'static ProfileItem> {
        self.profile_items().iter().find(|item| item.name == name)
    }
}

impl fmt::Display for Platform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Platform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "twitter" => Ok(Platform::Twitter),
            "googleplus" | "google+" => Ok(Platform::GooglePlus),
            _ => Err(Error::Vocabulary {
                field: "platform".into(),
                value: s.into(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OsnUser {
    pub id: String,
    pub profile: BTreeMap<String, String>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub stage: Option<u32>,
}

/// Immutable follow graph. User indices follow ascending id order.
#[derive(Debug, Clone, PartialEq)]
pub struct OsnGraph {
    platform: Platform,
    users: Vec<OsnUser>,
    index: HashMap<String, usize>,
    following: Vec<BTreeSet<usize>>,
    followers: Vec<BTreeSet<usize>>,
    stages: HashMap<(usize, usize), u32>,
}

impl OsnGraph {
    /// Validates and assembles a graph from in-memory users and edges.
    pub fn from_parts(platform: Platform, users: Vec<OsnUser>, edges: Vec<Edge>) -> Result<Self> {
        let users = users.into_iter().map(|u| (u, 0)).collect();
        let edges = edges.into_iter().map(|e| (e, 0)).collect();
        Self::assemble(platform, users, edges)
    }

    fn assemble(
        platform: Platform,
        mut users: Vec<(OsnUser, usize)>,
        edges: Vec<(Edge, usize)>,
    ) -> Result<Self> {
        for (user, line) in &users {
            validate_profile(platform, user, *line)?;
        }
        users.sort_by(|a, b| a.0.id.cmp(&b.0.id));
        for pair in users.windows(2) {
            if pair[0].0.id == pair[1].0.id {
                return Err(Error::Schema {
                    line: pair[1].1.max(pair[0].1),
                    message: format!("duplicate user id '{}'", pair[1].0.id),
                });
            }
        }
        let users: Vec<OsnUser> = users.into_iter().map(|(u, _)| u).collect();
        let index: HashMap<String, usize> = users
            .iter()
            .enumerate()
            .map(|(i, u)| (u.id.clone(), i))
            .collect();

        let n = users.len();
        let mut following = vec![BTreeSet::new(); n];
        let mut followers = vec![BTreeSet::new(); n];
        let mut stages = HashMap::new();
        for (edge, line) in edges {
            let from = *index
                .get(&edge.from)
                .ok_or_else(|| Error::DanglingEndpoint(edge.from.clone()))?;
            let to = *index
                .get(&edge.to)
                .ok_or_else(|| Error::DanglingEndpoint(edge.to.clone()))?;
            if from == to {
                return Err(Error::Schema {
                    line,
                    message: format!("self-loop on '{}'", edge.from),
                });
            }
            match (platform, edge.stage) {
                (Platform::Twitter, Some(_)) => {
                    return Err(Error::Schema {
                        line,
                        message: "stage field is not allowed in twitter mode".into(),
                    })
                }
                (Platform::GooglePlus, None) => {
                    return Err(Error::Schema {
                        line,
                        message: "googleplus edges require a stage".into(),
                    })
                }
                (Platform::GooglePlus, Some(stage)) => {
                    stages.insert((from, to), stage);
                }
                (Platform::Twitter, None) => {}
            }
            if !following[from].insert(to) {
                return Err(Error::Schema {
                    line,
                    message: format!("duplicate edge {} -> {}", edge.from, edge.to),
                });
            }
            followers[to].insert(from);
        }

        Ok(OsnGraph {
            platform,
            users,
            index,
            following,
            followers,
            stages,
        })
    }

    pub fn platform(&self) -> Platform {
        self.platform
    }

    pub fn user_count(&self) -> usize {
        self.users.len()
    }

    pub fn edge_count(&self) -> usize {
        self.following.iter().map(BTreeSet::len).sum()
    }

    pub fn users(&self) -> &[OsnUser] {
        &self.users
    }

    pub fn user(&self, idx: usize) -> &OsnUser {
        &self.users[idx]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn following(&self, idx: usize) -> &BTreeSet<usize> {
        &self.following[idx]
    }

    pub fn followers(&self, idx: usize) -> &BTreeSet<usize> {
        &self.followers[idx]
    }

    pub fn following_count(&self, idx: usize) -> usize {
        self.following[idx].len()
    }

    pub fn follower_count(&self, idx: usize) -> usize {
        self.followers[idx].len()
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.following[from].contains(&to)
    }

    pub fn stage(&self, from: usize, to: usize) -> Option<u32> {
        self.stages.get(&(from, to)).copied()
    }

    /// All edges in (from id, to id) order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.following
            .iter()
            .enumerate()
            .flat_map(|(from, tos)| tos.iter().map(move |&to| (from, to)))
    }

    pub fn load(path: impl AsRef<Path>, platform: Platform) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(BufReader::new(file), platform)
    }

    pub fn read(reader: impl BufRead, platform: Platform) -> Result<Self> {
        let mut users = Vec::new();
        let mut edges = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| Error::Parse {
                line: lineno,
                message: e.to_string(),
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: GraphLine = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: lineno,
                message: e.to_string(),
            })?;
            match parsed {
                GraphLine::User {
                    id,
                    profile,
                    verified,
                } => {
                    let profile = profile
                        .into_iter()
                        .map(|(k, v)| (k, v.into_string()))
                        .collect();
                    users.push((
                        OsnUser {
                            id: id.into_string(),
                            profile,
                            verified,
                        },
                        lineno,
                    ));
                }
                GraphLine::Edge { from, to, stage } => edges.push((
                    Edge {
                        from: from.into_string(),
                        to: to.into_string(),
                        stage,
                    },
                    lineno,
                )),
            }
        }
        Self::assemble(platform, users, edges)
    }

    /// Writes users (by id) then edges (by endpoint ids).
    pub fn write(&self, mut out: impl Write) -> Result<()> {
        let io = |e| Error::io("<graph output>", e);
        for user in &self.users {
            let line = serde_json::json!({
                "kind": "user",
                "id": user.id,
                "profile": user.profile,
                "verified": user.verified,
            });
            writeln!(out, "{line}").map_err(io)?;
        }
        for (from, to) in self.edges() {
            let mut line = serde_json::json!({
                "kind": "edge",
                "from": self.users[from].id,
                "to": self.users[to].id,
            });
            if let Some(stage) = self.stage(from, to) {
                line["stage"] = stage.into();
            }
            writeln!(out, "{line}").map_err(io)?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }
}

fn validate_profile(platform: Platform, user: &OsnUser, line: usize) -> Result<()> {
    for (name, value) in &user.profile {
        let item = platform.profile_item(name).ok_or_else(|| Error::Schema {
            line,
            message: format!(
                "unknown {platform} profile item '{name}' for user '{}'",
                user.id
            ),
        })?;
        if !item.values.contains(&value.as_str()) {
            return Err(Error::Vocabulary {
                field: name.clone(),
                value: value.clone(),
            });
        }
    }
    if let Some(missing) = platform
        .profile_items()
        .iter()
        .find(|item| !user.profile.contains_key(item.name))
    {
        return Err(Error::Schema {
            line,
            message: format!("user '{}' lacks profile item '{}'", user.id, missing.name),
        });
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum GraphLine {
    User {
        id: Scalar,
        #[serde(default)]
        profile: BTreeMap<String, Scalar>,
        #[serde(default)]
        verified: bool,
    },
    Edge {
        from: Scalar,
        to: Scalar,
        #[serde(default)]
        stage: Option<u32>,
    },
}

/// Ids and profile settings may be written as strings, integers or booleans.
#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Str(String),
    Int(i64),
    Bool(bool),
}

impl Scalar {
    fn into_string(self) -> String {
        match self {
            Scalar::Str(s) => s,
            Scalar::Int(i) => i.to_string(),
            Scalar::Bool(b) => if b { "1" } else { "0" }.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn user_line(id: &str) -> String {
        format!(
            r#"{{"kind":"user","id":"{id}","profile":{{"URL":"blank","GEO":0,"Protected":"1"}}}}"#
        )
    }

    fn load(text: &str, platform: Platform) -> Result<OsnGraph> {
        OsnGraph::read(text.as_bytes(), platform)
    }

    #[test]
    fn two_users_one_edge() {
        let text = format!(
            "{}\n{}\n{}\n",
            user_line("A"),
            user_line("B"),
            r#"{"kind":"edge","from":"A","to":"B"}"#
        );
        let g = load(&text, Platform::Twitter).unwrap();
        let a = g.index_of("A").unwrap();
        let b = g.index_of("B").unwrap();
        assert_eq!(g.following(a).iter().copied().collect::<Vec<_>>(), vec![b]);
        assert_eq!(g.followers(b).iter().copied().collect::<Vec<_>>(), vec![a]);
        assert_eq!(g.follower_count(a), 0);
        assert!(!g.user(a).verified);
    }

    #[test]
    fn empty_file_gives_empty_graph() {
        let g = load("", Platform::Twitter).unwrap();
        assert_eq!(g.user_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn dangling_endpoint_is_named() {
        let text = format!(
            "{}\n{}\n",
            user_line("A"),
            r#"{"kind":"edge","from":"A","to":"C"}"#
        );
        match load(&text, Platform::Twitter) {
            Err(Error::DanglingEndpoint(id)) => assert_eq!(id, "C"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let text = format!("{}\n{{not json\n", user_line("A"));
        match load(&text, Platform::Twitter) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stage_rejected_in_twitter_mode() {
        let text = format!(
            "{}\n{}\n{}\n",
            user_line("A"),
            user_line("B"),
            r#"{"kind":"edge","from":"A","to":"B","stage":0}"#
        );
        assert!(matches!(
            load(&text, Platform::Twitter),
            Err(Error::Schema { line: 3, .. })
        ));
    }

    #[test]
    fn unknown_profile_item_rejected() {
        let text = r#"{"kind":"user","id":"A","profile":{"URL":"blank","GEO":"0","Protected":"0","Bio":"x"}}"#;
        assert!(matches!(
            load(text, Platform::Twitter),
            Err(Error::Schema { .. })
        ));
        let text = r#"{"kind":"user","id":"A","profile":{"URL":"mine","GEO":"0","Protected":"0"}}"#;
        assert!(matches!(
            load(text, Platform::Twitter),
            Err(Error::Vocabulary { .. })
        ));
    }

    #[test]
    fn line_order_does_not_matter() {
        let e = r#"{"kind":"edge","from":"B","to":"A"}"#;
        let a = format!("{}\n{}\n{}\n", user_line("A"), user_line("B"), e);
        let b = format!("{}\n{}\n{}\n", e, user_line("B"), user_line("A"));
        assert_eq!(
            load(&a, Platform::Twitter).unwrap(),
            load(&b, Platform::Twitter).unwrap()
        );
    }

    #[test]
    fn write_then_read_is_identity() {
        let text = format!(
            "{}\n{}\n{}\n{}\n",
            user_line("x"),
            user_line("y"),
            r#"{"kind":"edge","from":"x","to":"y"}"#,
            r#"{"kind":"edge","from":"y","to":"x"}"#,
        );
        let g = load(&text, Platform::Twitter).unwrap();
        let again = load(&g.to_jsonl(), Platform::Twitter).unwrap();
        assert_eq!(g, again);
        assert_eq!(g.to_jsonl(), again.to_jsonl());
    }
}
