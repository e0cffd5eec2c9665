//! Random well-formed `.dsa` sources.

use rand::rngs::StdRng;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};

const NAMES: &[&str] = &[
    "Web server",
    "FAQ \"set\"",
    "Back\\slash",
    "Données utilisateur",
    "対話管理",
    "Tab\tand newline\n",
    "a | b",
    "x",
];

const USER_LEAVES: &[&str] = &["functional", "emotional", "self_expressive", "social"];
const QUALITY_LEAVES: &[&str] = &["must_be", "attractive"];
const BUSINESS_LEAVES: &[&str] = &["revenue_increase", "cost_reduction", "new_revenue"];
const RISK_LEAVES: &[&str] = &[
    "transparency",
    "justice_fairness",
    "non_maleficence",
    "responsibility",
    "privacy",
    "beneficence",
    "freedom_autonomy",
];
const COST_FORMS: &[&str] = &[
    "human",
    "information",
    "it",
    "human_resources",
    "information_resources",
    "it_resources",
];
const PLATFORMS: &[&str] = &["server", "device", "external_api", "browser"];
const SEVERITIES: &[&str] = &["low", "medium", "high"];

/// A generated system: a name and its top-level statements.
#[derive(Debug, Clone)]
pub struct Source {
    pub name: String,
    pub statements: Vec<String>,
}

impl Source {
    pub fn render(&self) -> String {
        let mut out = format!("system {} {{\n", quote(&self.name));
        for s in &self.statements {
            out.push_str(s);
            out.push('\n');
        }
        out.push_str("}\n");
        out
    }

    pub fn shuffled(&self, seed: u64) -> Source {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut statements = self.statements.clone();
        statements.shuffle(&mut rng);
        Source {
            name: self.name.clone(),
            statements,
        }
    }
}

pub fn quote(text: &str) -> String {
    let mut out = String::from("\"");
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

struct Gen {
    rng: StdRng,
}

impl Gen {
    fn name(&mut self) -> String {
        let base = NAMES.choose(&mut self.rng).unwrap();
        if self.rng.random_bool(0.5) {
            format!("{base} {}", self.rng.random_range(0..100))
        } else {
            base.to_string()
        }
    }

    fn desc(&mut self) -> String {
        if self.rng.random_bool(0.3) {
            String::new()
        } else {
            format!(" {}", quote(&self.name()))
        }
    }

    fn subset(&mut self, pool: &[String], min: usize, max: usize) -> Vec<String> {
        if pool.len() < min {
            return Vec::new();
        }
        let upper = max.min(pool.len());
        let n = self.rng.random_range(min..=upper);
        let mut picked: Vec<String> = pool.choose_multiple(&mut self.rng, n).cloned().collect();
        picked.sort_by_key(|p| pool.iter().position(|q| q == p));
        picked
    }

    fn leaves(&mut self, pool: &[&'static str], max: usize) -> Vec<&'static str> {
        let n = self.rng.random_range(0..=max);
        pool.choose_multiple(&mut self.rng, n).copied().collect()
    }

    fn description_clause(&mut self, clauses: &mut Vec<String>) {
        if self.rng.random_bool(0.2) {
            clauses.push(format!("description: {};", quote(&self.name())));
        }
    }
}

fn statement(head: String, clauses: Vec<String>) -> String {
    if clauses.is_empty() {
        format!("  {head}")
    } else {
        let mut out = format!("  {head} {{\n");
        for c in clauses {
            out.push_str(&format!("    {c}\n"));
        }
        out.push_str("  }");
        out
    }
}

fn list(key: &str, ids: &[String]) -> Option<String> {
    (!ids.is_empty()).then(|| format!("{key}: {};", ids.join(", ")))
}

/// A random source that parses and validates without errors.
pub fn random_source(seed: u64) -> Source {
    let mut g = Gen {
        rng: StdRng::seed_from_u64(seed),
    };
    let mut statements = Vec::new();

    let user = g.rng.random_bool(0.8).then(|| "u".to_string());
    let operator = g.rng.random_bool(0.8).then(|| "o".to_string());
    for (word, id) in [("user", &user), ("operator", &operator)] {
        if let Some(id) = id {
            let mut clauses = Vec::new();
            g.description_clause(&mut clauses);
            if g.rng.random_bool(0.3) {
                clauses.push(format!("role: {};", quote(&g.name())));
            }
            statements.push(statement(format!("actor {word} {id} {}", quote(&g.name())), clauses));
        }
    }

    let data: Vec<String> = (0..g.rng.random_range(0..4)).map(|i| format!("d{i}")).collect();
    for id in &data {
        let mut clauses = Vec::new();
        g.description_clause(&mut clauses);
        statements.push(statement(format!("data {id} {}", quote(&g.name())), clauses));
    }

    let mut functions = Vec::new();
    let components: Vec<String> = (0..g.rng.random_range(0..3)).map(|i| format!("c{i}")).collect();
    for id in &components {
        let mut clauses = Vec::new();
        g.description_clause(&mut clauses);
        for j in 0..g.rng.random_range(1..3) {
            let fid = format!("{id}_f{j}");
            let uses = g.subset(&data, 0, 2);
            let name = quote(&g.name());
            match list("uses", &uses) {
                Some(u) => clauses.push(format!("function {fid} {name} {{ {u} }}")),
                None => clauses.push(format!("function {fid} {name};")),
            }
            functions.push(fid);
        }
        clauses.extend(list("uses", &g.subset(&data, 0, 3)));
        if g.rng.random_bool(0.6) {
            clauses.push(format!("runs_on: {};", PLATFORMS.choose(&mut g.rng).unwrap()));
        }
        statements.push(statement(format!("component {id} {}", quote(&g.name())), clauses));
    }
    for i in 0..g.rng.random_range(0..2) {
        let fid = format!("tf{i}");
        let mut clauses = Vec::new();
        g.description_clause(&mut clauses);
        clauses.extend(list("uses", &g.subset(&data, 0, 2)));
        statements.push(statement(format!("function {fid} {}", quote(&g.name())), clauses));
        functions.push(fid);
    }

    let operator_activities: Vec<String> =
        (0..g.rng.random_range(0..3)).map(|i| format!("oa{i}")).collect();
    for id in &operator_activities {
        let mut clauses = Vec::new();
        g.description_clause(&mut clauses);
        if let Some(o) = operator.as_ref().filter(|_| g.rng.random_bool(0.8)) {
            clauses.push(format!("by: {o};"));
        }
        for leaf in g.leaves(BUSINESS_LEAVES, 2) {
            let d = g.desc();
            clauses.push(format!("yields_business_value: {leaf}{d};"));
        }
        statements.push(statement(format!("operator_activity {id} {}", quote(&g.name())), clauses));
    }

    let user_activities: Vec<String> =
        (0..g.rng.random_range(0..3)).map(|i| format!("ua{i}")).collect();
    for id in &user_activities {
        let mut clauses = Vec::new();
        g.description_clause(&mut clauses);
        if let Some(u) = user.as_ref().filter(|_| g.rng.random_bool(0.8)) {
            clauses.push(format!("by: {u};"));
        }
        for leaf in g.leaves(USER_LEAVES, 2) {
            let d = g.desc();
            clauses.push(format!("yields_user_value: {leaf}{d};"));
        }
        for leaf in g.leaves(QUALITY_LEAVES, 1) {
            let d = g.desc();
            clauses.push(format!("yields_quality_value: {leaf}{d};"));
        }
        clauses.extend(list("influences", &g.subset(&operator_activities, 0, 2)));
        statements.push(statement(format!("user_activity {id} {}", quote(&g.name())), clauses));
    }

    let activities: Vec<String> = user_activities
        .iter()
        .chain(&operator_activities)
        .cloned()
        .collect();
    for i in 0..g.rng.random_range(0..2) {
        let mut clauses = Vec::new();
        g.description_clause(&mut clauses);
        clauses.extend(list("serves", &g.subset(&activities, 0, 3)));
        clauses.extend(list("realized_by", &g.subset(&functions, 0, 3)));
        statements.push(statement(format!("service s{i} {}", quote(&g.name())), clauses));
    }

    let anchors: Vec<String> = components
        .iter()
        .chain(&functions)
        .chain(&data)
        .cloned()
        .collect();
    for i in 0..g.rng.random_range(0..4) {
        if anchors.is_empty() {
            break;
        }
        let mut clauses = Vec::new();
        g.description_clause(&mut clauses);
        clauses.extend(list("about", &g.subset(&anchors, 1, 2)));
        for _ in 0..g.rng.random_range(0..3) {
            let form = COST_FORMS.choose(&mut g.rng).unwrap();
            let d = g.desc();
            clauses.push(format!("implies_cost: {form}{d};"));
        }
        for leaf in g.leaves(RISK_LEAVES, 2) {
            let severity = if g.rng.random_bool(0.8) {
                format!(" severity: {}", SEVERITIES.choose(&mut g.rng).unwrap())
            } else {
                String::new()
            };
            let d = g.desc();
            clauses.push(format!("hinders: {leaf}{severity}{d};"));
        }
        statements.push(statement(format!("event e{i} {}", quote(&g.name())), clauses));
    }

    let mut name = g.name();
    if name.trim().is_empty() {
        name = "Generated".to_string();
    }
    Source { name, statements }
}

/// A statement that no derivation rule reads, with an id unused by
/// `random_source` and the fixtures.
pub fn inert_statement(seed: u64, existing_data: &[String]) -> String {
    let mut rng = StdRng::seed_from_u64(seed);
    let id = format!("inert_{}", rng.random_range(0..1_000_000));
    let name = quote(NAMES.choose(&mut rng).unwrap());
    let choice = rng.random_range(0..if existing_data.is_empty() { 5 } else { 6 });
    match choice {
        0 => format!("  data {id} {name}"),
        1 => format!("  service {id} {name}"),
        2 => format!("  function {id} {name}"),
        3 => format!("  user_activity {id} {name}"),
        4 => format!("  operator_activity {id} {name}"),
        _ => {
            let about = existing_data.choose(&mut rng).unwrap();
            format!("  event {id} {name} {{\n    about: {about};\n  }}")
        }
    }
}

/// Splits a canonical document into its top-level statements.
pub fn statements(canonical: &str) -> (String, Vec<String>) {
    let mut lines = canonical.lines();
    let header = lines.next().unwrap().to_string();
    let body: Vec<&str> = lines.collect();
    let body = body[..body.len() - 1].join("\n");
    let parts = body
        .split("\n\n")
        .filter(|s| !s.trim().is_empty())
        .map(str::to_string)
        .collect();
    (header, parts)
}

pub fn reassemble(header: &str, parts: &[String]) -> String {
    format!("{header}\n{}\n}}\n", parts.join("\n\n"))
}
