//! Axiom schemata and inference rules as data, the two logics built from
//! them, and syntactic instance checking.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{parse, Formula};
use crate::kripke::FrameClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxiomName {
    DBox,
    DDia,
    NBox,
    NDia,
    WCD,
    Af,
    Ab,
    Ad,
}

impl AxiomName {
    pub const ALL: [AxiomName; 8] = [
        AxiomName::DBox,
        AxiomName::DDia,
        AxiomName::NBox,
        AxiomName::NDia,
        AxiomName::WCD,
        AxiomName::Af,
        AxiomName::Ab,
        AxiomName::Ad,
    ];

    fn pattern_text(self) -> &'static str {
        match self {
            AxiomName::DBox => "[]p & []q -> [](p & q)",
            AxiomName::DDia => "<>(p | q) -> <>p | <>q",
            AxiomName::NBox => "[]true",
            AxiomName::NDia => "~<>false",
            AxiomName::WCD => "[](p | q) -> (<>p -> []q) -> []q",
            AxiomName::Af => "<>(p -> q) -> []p -> <>q",
            AxiomName::Ab => "(<>p -> []q) -> [](p -> q)",
            AxiomName::Ad => "[](p | q) -> <>p | []q",
        }
    }
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomName::DBox => "D□",
            AxiomName::DDia => "D◇",
            AxiomName::NBox => "N□",
            AxiomName::NDia => "N◇",
            AxiomName::WCD => "wCD",
            AxiomName::Af => "Af",
            AxiomName::Ab => "Ab",
            AxiomName::Ad => "Ad",
        })
    }
}

impl FromStr for AxiomName {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let name = match s {
            "D□" | "Dbox" | "DBox" => AxiomName::DBox,
            "D◇" | "Ddia" | "DDia" => AxiomName::DDia,
            "N□" | "Nbox" | "NBox" => AxiomName::NBox,
            "N◇" | "Ndia" | "NDia" => AxiomName::NDia,
            "wCD" | "WCD" | "wcd" => AxiomName::WCD,
            "Af" | "af" => AxiomName::Af,
            "Ab" | "ab" => AxiomName::Ab,
            "Ad" | "ad" => AxiomName::Ad,
            _ => return Err(LogicError::UnknownName(s.to_string())),
        };
        Ok(name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AxiomSchema {
    pub name: AxiomName,
    /// Formula over the schematic atoms `p`, `q`, `r`.
    pub pattern: Formula,
}

impl AxiomSchema {
    pub fn of(name: AxiomName) -> AxiomSchema {
        AxiomSchema {
            name,
            pattern: parse(name.pattern_text()).expect("built-in schema parses"),
        }
    }

    pub fn schematic_atoms(&self) -> Vec<String> {
        self.pattern.atoms().into_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("no binding for schematic atom `{atom}` of {schema}")]
    MissingBinding { schema: String, atom: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LogicId {
    #[serde(rename = "FIK")]
    Fik,
    #[serde(rename = "LIK")]
    Lik,
}

impl LogicId {
    pub const ALL: [LogicId; 2] = [LogicId::Fik, LogicId::Lik];

    /// The class the logic is complete for.
    pub fn frame_class(self) -> FrameClass {
        match self {
            LogicId::Fik => FrameClass::FC,
            LogicId::Lik => FrameClass::FDC,
        }
    }

    /// The class of the saturated models built for the logic.
    pub fn upgraded_class(self) -> FrameClass {
        match self {
            LogicId::Fik => FrameClass::FUC,
            LogicId::Lik => FrameClass::FDUC,
        }
    }

    pub fn axioms(self) -> Vec<AxiomName> {
        let mut names = vec![
            AxiomName::DBox,
            AxiomName::DDia,
            AxiomName::NBox,
            AxiomName::NDia,
            AxiomName::WCD,
            AxiomName::Af,
        ];
        if self == LogicId::Lik {
            names.push(AxiomName::Ad);
        }
        names
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogicId::Fik => "FIK",
            LogicId::Lik => "LIK",
        })
    }
}

impl FromStr for LogicId {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fik" => Ok(LogicId::Fik),
            "lik" => Ok(LogicId::Lik),
            _ => Err(LogicError::UnknownName(s.to_string())),
        }
    }
}

pub fn axiom_schemata(l: LogicId) -> Vec<AxiomSchema> {
    l.axioms().into_iter().map(AxiomSchema::of).collect()
}

pub fn instantiate_schema(
    s: &AxiomSchema,
    binding: &BTreeMap<String, Formula>,
) -> Result<Formula, LogicError> {
    if let Some(atom) = s
        .schematic_atoms()
        .into_iter()
        .find(|a| !binding.contains_key(a))
    {
        return Err(LogicError::MissingBinding {
            schema: s.name.to_string(),
            atom,
        });
    }
    Ok(s.pattern.substitute(binding))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleName {
    RBox,
    RDia,
    RI,
    MP,
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleName::RBox => "R□",
            RuleName::RDia => "R◇",
            RuleName::RI => "RI",
            RuleName::MP => "MP",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InferenceRule {
    pub name: RuleName,
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl InferenceRule {
    pub const ALL: [RuleName; 4] = [RuleName::RBox, RuleName::RDia, RuleName::RI, RuleName::MP];

    pub fn of(name: RuleName) -> InferenceRule {
        let (premises, conclusion): (&[&str], &str) = match name {
            RuleName::RBox => (&["p -> q"], "[]p -> []q"),
            RuleName::RDia => (&["p -> q"], "<>p -> <>q"),
            RuleName::RI => (&["<>p -> q | [](p -> r)"], "<>p -> q | <>r"),
            RuleName::MP => (&["p", "p -> q"], "q"),
        };
        InferenceRule {
            name,
            premises: premises
                .iter()
                .map(|s| parse(s).expect("built-in rule parses"))
                .collect(),
            conclusion: parse(conclusion).expect("built-in rule parses"),
        }
    }

    pub fn schematic_atoms(&self) -> Vec<String> {
        let mut atoms = self.conclusion.atoms();
        for p in &self.premises {
            atoms.extend(p.atoms());
        }
        atoms.into_iter().collect()
    }

    /// Applies a substitution to premises and conclusion.
    pub fn instantiate(&self, binding: &BTreeMap<String, Formula>) -> (Vec<Formula>, Formula) {
        (
            self.premises
                .iter()
                .map(|p| p.substitute(binding))
                .collect(),
            self.conclusion.substitute(binding),
        )
    }
}

fn match_pattern(
    pattern: &Formula,
    target: &Formula,
    binding: &mut BTreeMap<String, Formula>,
) -> bool {
    use Formula::*;
    match (pattern, target) {
        (Atom(p), _) => match binding.get(&**p) {
            Some(bound) => bound == target,
            None => {
                binding.insert(p.to_string(), target.clone());
                true
            }
        },
        (Top, Top) | (Bot, Bot) => true,
        (Impl(a, b), Impl(c, d)) | (And(a, b), And(c, d)) | (Or(a, b), Or(c, d)) => {
            match_pattern(a, c, binding) && match_pattern(b, d, binding)
        }
        (Box(a), Box(c)) | (Dia(a), Dia(c)) => match_pattern(a, c, binding),
        _ => false,
    }
}

/// Whether one substitution maps every premise pattern and the conclusion
/// pattern onto the given formulas.
pub fn check_rule_instance(
    rule: &InferenceRule,
    premises: &[Formula],
    conclusion: &Formula,
) -> bool {
    if premises.len() != rule.premises.len() {
        return false;
    }
    let mut binding = BTreeMap::new();
    rule.premises
        .iter()
        .zip(premises)
        .all(|(pat, f)| match_pattern(pat, f, &mut binding))
        && match_pattern(&rule.conclusion, conclusion, &mut binding)
}

/// Binding of the schematic atoms to concrete formulas, when `f` is an
/// instance of the schema.
pub fn match_schema(s: &AxiomSchema, f: &Formula) -> Option<BTreeMap<String, Formula>> {
    let mut binding = BTreeMap::new();
    match_pattern(&s.pattern, f, &mut binding).then_some(binding)
}
