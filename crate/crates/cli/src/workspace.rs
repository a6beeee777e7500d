//! Plain-text workspaces: named domains, functions, relations, clones,
//! classes, constraints and schemes, one declaration per line.
//!
//! The format is line-oriented and human-diffable. Blank lines and lines
//! starting with `#` are ignored. Element digits are restricted to domain
//! sizes up to 10 so tuples and tables stay readable as digit strings.

use std::collections::BTreeMap;
use std::fmt;

use clonecraft_core::{
    CloneSpec, Constraint, DomainSize, FiniteFunction, FunctionClass, Point, Relation, Scheme,
    SchemeSlot,
};

#[derive(Debug, Clone, PartialEq)]
pub struct NamedFunction {
    pub dom: String,
    pub cod: String,
    pub value: FiniteFunction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedRelation {
    pub dom: String,
    pub value: Relation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedClone {
    pub dom: String,
    pub generators: Vec<String>,
    pub value: CloneSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedClass {
    pub dom: String,
    pub cod: String,
    pub members: Vec<String>,
    pub value: FunctionClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedConstraint {
    pub antecedent: String,
    pub consequent: String,
    pub value: Constraint,
}

/// A parsed workspace. Names are unique per kind and all references resolve.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Workspace {
    pub domains: BTreeMap<String, DomainSize>,
    pub functions: BTreeMap<String, NamedFunction>,
    pub relations: BTreeMap<String, NamedRelation>,
    pub clones: BTreeMap<String, NamedClone>,
    pub classes: BTreeMap<String, NamedClass>,
    pub constraints: BTreeMap<String, NamedConstraint>,
    pub schemes: BTreeMap<String, Scheme>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_workspace(text: &str) -> Result<Workspace, ParseError> {
    let mut ws = Workspace::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens[0] {
            "domain" => parse_domain(&mut ws, &tokens, line)?,
            "function" => parse_function(&mut ws, &tokens, line)?,
            "relation" => parse_relation(&mut ws, &tokens, line)?,
            "clone" => parse_clone(&mut ws, &tokens, line)?,
            "class" => parse_class(&mut ws, &tokens, line)?,
            "constraint" => parse_constraint(&mut ws, &tokens, line)?,
            "scheme" => parse_scheme(&mut ws, &tokens, line)?,
            other => return err(line, format!("unknown declaration {other:?}")),
        }
    }
    Ok(ws)
}

fn take_name(
    tokens: &[&str],
    pos: usize,
    line: usize,
    kind: &str,
) -> Result<String, ParseError> {
    let name = tokens
        .get(pos)
        .ok_or(ParseError {
            line,
            message: format!("missing {kind} name"),
        })?
        .to_string();
    if !valid_name(&name) {
        return err(line, format!("invalid {kind} name {name:?}"));
    }
    Ok(name)
}

fn lookup_domain(ws: &Workspace, name: &str, line: usize) -> Result<DomainSize, ParseError> {
    ws.domains
        .get(name)
        .copied()
        .ok_or(ParseError {
            line,
            message: format!("unknown domain {name:?}"),
        })
}

fn parse_domain(ws: &mut Workspace, tokens: &[&str], line: usize) -> Result<(), ParseError> {
    if tokens.len() != 3 {
        return err(line, "expected: domain <name> <size>");
    }
    let name = take_name(tokens, 1, line, "domain")?;
    if ws.domains.contains_key(&name) {
        return err(line, format!("duplicate domain {name:?}"));
    }
    let size: usize = tokens[2]
        .parse()
        .map_err(|_| ParseError {
            line,
            message: format!("invalid domain size {:?}", tokens[2]),
        })?;
    if !(1..=10).contains(&size) {
        return err(line, format!("domain size {size} outside 1..=10"));
    }
    ws.domains
        .insert(name, DomainSize::new(size).expect("validated size"));
    Ok(())
}

fn parse_function(ws: &mut Workspace, tokens: &[&str], line: usize) -> Result<(), ParseError> {
    if tokens.len() != 6 {
        return err(line, "expected: function <name> <dom> <cod> <arity> <table>");
    }
    let name = take_name(tokens, 1, line, "function")?;
    if ws.functions.contains_key(&name) {
        return err(line, format!("duplicate function {name:?}"));
    }
    let dom = lookup_domain(ws, tokens[2], line)?;
    let cod = lookup_domain(ws, tokens[3], line)?;
    let arity: usize = tokens[4].parse().map_err(|_| ParseError {
        line,
        message: format!("invalid arity {:?}", tokens[4]),
    })?;
    let value = FiniteFunction::from_digits(arity, dom, cod, tokens[5]).map_err(|e| ParseError {
        line,
        message: format!("function {name}: {e}"),
    })?;
    ws.functions.insert(
        name,
        NamedFunction {
            dom: tokens[2].to_string(),
            cod: tokens[3].to_string(),
            value,
        },
    );
    Ok(())
}

fn parse_relation(ws: &mut Workspace, tokens: &[&str], line: usize) -> Result<(), ParseError> {
    if tokens.len() != 5 {
        return err(line, "expected: relation <name> <dom> <arity> {t1,t2,...}");
    }
    let name = take_name(tokens, 1, line, "relation")?;
    if ws.relations.contains_key(&name) {
        return err(line, format!("duplicate relation {name:?}"));
    }
    let dom = lookup_domain(ws, tokens[2], line)?;
    let arity: usize = tokens[3].parse().map_err(|_| ParseError {
        line,
        message: format!("invalid arity {:?}", tokens[3]),
    })?;
    let body = tokens[4];
    if !body.starts_with('{') || !body.ends_with('}') {
        return err(line, "tuples must be written as {t1,t2,...}");
    }
    let inner = &body[1..body.len() - 1];
    let mut value = Relation::empty(arity, dom).map_err(|e| ParseError {
        line,
        message: format!("relation {name}: {e}"),
    })?;
    for part in inner.split(',').filter(|p| !p.is_empty()) {
        if part.len() != arity {
            return err(
                line,
                format!("relation {name}: tuple {part:?} does not have arity {arity}"),
            );
        }
        let tuple = Point::from_digits(part, dom).map_err(|e| ParseError {
            line,
            message: format!("relation {name}: {e}"),
        })?;
        value.insert(tuple).map_err(|e| ParseError {
            line,
            message: format!("relation {name}: {e}"),
        })?;
    }
    ws.relations.insert(
        name,
        NamedRelation {
            dom: tokens[2].to_string(),
            value,
        },
    );
    Ok(())
}

fn parse_name_list(
    tokens: &[&str],
    pos: usize,
    key: &str,
    line: usize,
) -> Result<Vec<String>, ParseError> {
    let token = tokens.get(pos).ok_or(ParseError {
        line,
        message: format!("missing {key}=<names>"),
    })?;
    let prefix = format!("{key}=");
    let Some(list) = token.strip_prefix(&prefix) else {
        return err(line, format!("expected {key}=<names>, found {token:?}"));
    };
    let mut names: Vec<String> = list
        .split(',')
        .filter(|p| !p.is_empty())
        .map(str::to_string)
        .collect();
    names.sort();
    names.dedup();
    Ok(names)
}

fn parse_clone(ws: &mut Workspace, tokens: &[&str], line: usize) -> Result<(), ParseError> {
    if tokens.len() != 4 {
        return err(line, "expected: clone <name> <dom> generators=<f1,f2,...>");
    }
    let name = take_name(tokens, 1, line, "clone")?;
    if ws.clones.contains_key(&name) {
        return err(line, format!("duplicate clone {name:?}"));
    }
    let dom = lookup_domain(ws, tokens[2], line)?;
    let generators = parse_name_list(tokens, 3, "generators", line)?;
    let mut class = FunctionClass::new(dom, dom);
    for g in &generators {
        let f = ws.functions.get(g).ok_or(ParseError {
            line,
            message: format!("clone {name}: unknown function {g:?}"),
        })?;
        class.insert(f.value.clone()).map_err(|e| ParseError {
            line,
            message: format!("clone {name}: generator {g}: {e}"),
        })?;
    }
    let value = CloneSpec::new(dom, class).map_err(|e| ParseError {
        line,
        message: format!("clone {name}: {e}"),
    })?;
    ws.clones.insert(
        name,
        NamedClone {
            dom: tokens[2].to_string(),
            generators,
            value,
        },
    );
    Ok(())
}

fn parse_class(ws: &mut Workspace, tokens: &[&str], line: usize) -> Result<(), ParseError> {
    if tokens.len() != 5 {
        return err(line, "expected: class <name> <dom> <cod> members=<f1,f2,...>");
    }
    let name = take_name(tokens, 1, line, "class")?;
    if ws.classes.contains_key(&name) {
        return err(line, format!("duplicate class {name:?}"));
    }
    let dom = lookup_domain(ws, tokens[2], line)?;
    let cod = lookup_domain(ws, tokens[3], line)?;
    let members = parse_name_list(tokens, 4, "members", line)?;
    let mut value = FunctionClass::new(dom, cod);
    for m in &members {
        let f = ws.functions.get(m).ok_or(ParseError {
            line,
            message: format!("class {name}: unknown function {m:?}"),
        })?;
        value.insert(f.value.clone()).map_err(|e| ParseError {
            line,
            message: format!("class {name}: member {m}: {e}"),
        })?;
    }
    ws.classes.insert(
        name,
        NamedClass {
            dom: tokens[2].to_string(),
            cod: tokens[3].to_string(),
            members,
            value,
        },
    );
    Ok(())
}

fn parse_constraint(ws: &mut Workspace, tokens: &[&str], line: usize) -> Result<(), ParseError> {
    if tokens.len() != 4 {
        return err(line, "expected: constraint <name> <antecedent> <consequent>");
    }
    let name = take_name(tokens, 1, line, "constraint")?;
    if ws.constraints.contains_key(&name) {
        return err(line, format!("duplicate constraint {name:?}"));
    }
    let ante = ws.relations.get(tokens[2]).ok_or(ParseError {
        line,
        message: format!("constraint {name}: unknown relation {:?}", tokens[2]),
    })?;
    let cons = ws.relations.get(tokens[3]).ok_or(ParseError {
        line,
        message: format!("constraint {name}: unknown relation {:?}", tokens[3]),
    })?;
    let value = Constraint::new(ante.value.clone(), cons.value.clone()).map_err(|e| ParseError {
        line,
        message: format!("constraint {name}: {e}"),
    })?;
    ws.constraints.insert(
        name,
        NamedConstraint {
            antecedent: tokens[2].to_string(),
            consequent: tokens[3].to_string(),
            value,
        },
    );
    Ok(())
}

fn parse_scheme(ws: &mut Workspace, tokens: &[&str], line: usize) -> Result<(), ParseError> {
    if tokens.len() != 5 {
        return err(
            line,
            "expected: scheme <name> target=<m> vars=<k> maps=[h1;h2;...]",
        );
    }
    let name = take_name(tokens, 1, line, "scheme")?;
    if ws.schemes.contains_key(&name) {
        return err(line, format!("duplicate scheme {name:?}"));
    }
    let target: usize = tokens[2]
        .strip_prefix("target=")
        .and_then(|v| v.parse().ok())
        .ok_or(ParseError {
            line,
            message: format!("expected target=<m>, found {:?}", tokens[2]),
        })?;
    let vars: usize = tokens[3]
        .strip_prefix("vars=")
        .and_then(|v| v.parse().ok())
        .ok_or(ParseError {
            line,
            message: format!("expected vars=<k>, found {:?}", tokens[3]),
        })?;
    let body = tokens[4]
        .strip_prefix("maps=[")
        .and_then(|v| v.strip_suffix(']'))
        .ok_or(ParseError {
            line,
            message: format!("expected maps=[...], found {:?}", tokens[4]),
        })?;
    let mut maps = Vec::new();
    for map_text in body.split(';') {
        let mut slots = Vec::new();
        for slot_text in map_text.split(',').filter(|p| !p.is_empty()) {
            let slot = if let Some(i) = slot_text.strip_prefix('t') {
                i.parse().ok().map(SchemeSlot::Target)
            } else if let Some(v) = slot_text.strip_prefix('v') {
                v.parse().ok().map(SchemeSlot::Var)
            } else {
                None
            };
            match slot {
                Some(s) => slots.push(s),
                None => {
                    return err(
                        line,
                        format!("scheme {name}: invalid slot {slot_text:?} (use t<i> or v<i>)"),
                    )
                }
            }
        }
        maps.push(slots);
    }
    let value = Scheme::new(target, vars, maps).map_err(|e| ParseError {
        line,
        message: format!("scheme {name}: {e}"),
    })?;
    ws.schemes.insert(name, value);
    Ok(())
}

fn digits_of(table: &[usize]) -> String {
    table.iter().map(|v| char::from(b'0' + *v as u8)).collect()
}

impl Workspace {
    /// Inverse printer: renders the workspace back into the line format with
    /// entities listed alphabetically per kind and tuples in canonical order.
    pub fn format(&self) -> String {
        let mut out = String::new();
        for (name, size) in &self.domains {
            out.push_str(&format!("domain {name} {size}\n"));
        }
        for (name, f) in &self.functions {
            out.push_str(&format!(
                "function {name} {} {} {} {}\n",
                f.dom,
                f.cod,
                f.value.arity(),
                digits_of(f.value.table())
            ));
        }
        for (name, r) in &self.relations {
            out.push_str(&format!(
                "relation {name} {} {} {}\n",
                r.dom,
                r.value.arity(),
                r.value
            ));
        }
        for (name, c) in &self.clones {
            out.push_str(&format!(
                "clone {name} {} generators={}\n",
                c.dom,
                c.generators.join(",")
            ));
        }
        for (name, c) in &self.classes {
            out.push_str(&format!(
                "class {name} {} {} members={}\n",
                c.dom,
                c.cod,
                c.members.join(",")
            ));
        }
        for (name, c) in &self.constraints {
            out.push_str(&format!(
                "constraint {name} {} {}\n",
                c.antecedent, c.consequent
            ));
        }
        for (name, s) in &self.schemes {
            let maps: Vec<String> = s
                .maps()
                .iter()
                .map(|map| {
                    map.iter()
                        .map(|slot| match slot {
                            SchemeSlot::Target(i) => format!("t{i}"),
                            SchemeSlot::Var(v) => format!("v{v}"),
                        })
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            out.push_str(&format!(
                "scheme {name} target={} vars={} maps=[{}]\n",
                s.target(),
                s.vars(),
                maps.join(";")
            ));
        }
        out
    }
}
