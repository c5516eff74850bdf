//! Prompt templates for the three prompting strategies.
//!
//! Each template is a fixed text fixture: the task instructions, the
//! demonstrations, and a final query block whose `{start}`, `{goal}`,
//! `{horizontal_barriers}`, and `{vertical_barriers}` placeholders are filled
//! per query. Rendering is plain substitution, so identical inputs always
//! produce identical bytes.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::env::{Barrier, Environment, Point};

const FEW_SHOT: &str = include_str!("../../templates/few_shot.txt");
const COT: &str = include_str!("../../templates/cot.txt");
const REPE: &str = include_str!("../../templates/repe.txt");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptStyle {
    /// Plain demonstrations, 5 shots.
    #[default]
    FewShot,
    /// Demonstrations with a reasoning line, 3 shots.
    Cot,
    /// Demonstrations with per-step select/evaluate iterations, 3 shots.
    Repe,
}

impl PromptStyle {
    pub const ALL: [PromptStyle; 3] = [PromptStyle::FewShot, PromptStyle::Cot, PromptStyle::Repe];

    pub fn shots(self) -> usize {
        match self {
            PromptStyle::FewShot => 5,
            PromptStyle::Cot | PromptStyle::Repe => 3,
        }
    }

    pub fn template(self) -> &'static str {
        match self {
            PromptStyle::FewShot => FEW_SHOT,
            PromptStyle::Cot => COT,
            PromptStyle::Repe => REPE,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PromptStyle::FewShot => "few_shot",
            PromptStyle::Cot => "cot",
            PromptStyle::Repe => "repe",
        }
    }
}

impl std::str::FromStr for PromptStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "few_shot" | "few-shot" | "fewshot" => Ok(PromptStyle::FewShot),
            "cot" => Ok(PromptStyle::Cot),
            "repe" => Ok(PromptStyle::Repe),
            other => Err(format!("unknown prompt style `{other}` (expected few_shot|cot|repe)")),
        }
    }
}

impl std::fmt::Display for PromptStyle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// `[[a, b, c], ...]`, or `[]` when empty.
pub fn format_barriers(barriers: &[Barrier]) -> String {
    let mut out = String::from("[");
    for (i, b) in barriers.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let [a, s, e] = b.as_triple();
        write!(out, "[{a}, {s}, {e}]").unwrap();
    }
    out.push(']');
    out
}

/// `[[x1, y1], [x2, y2], ...]`
pub fn format_points(points: &[Point]) -> String {
    let inner: Vec<String> = points.iter().map(Point::to_string).collect();
    format!("[{}]", inner.join(", "))
}

/// The line a model is asked to end its answer with.
pub fn format_generated_path(points: &[Point]) -> String {
    format!("Generated Path: {}", format_points(points))
}

pub fn render_prompt(style: PromptStyle, env: &Environment, s0: Point, sg: Point) -> String {
    style
        .template()
        .replace("{start}", &s0.to_string())
        .replace("{goal}", &sg.to_string())
        .replace("{horizontal_barriers}", &format_barriers(env.h_barriers()))
        .replace("{vertical_barriers}", &format_barriers(env.v_barriers()))
}
