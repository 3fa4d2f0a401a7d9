//! Workspace documents: a versioned envelope around one of seven payload
//! kinds. Everything is addressed by name; ids only exist after loading.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{ParseError, WorkbenchError};

pub const FORMAT_VERSION: &str = "1.0.0";
const SUPPORTED_MAJOR: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Presentation,
    Category,
    Presheaf,
    Morphism,
    Model,
    KanModel,
    Trace,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Presentation => "presentation",
            Kind::Category => "category",
            Kind::Presheaf => "presheaf",
            Kind::Morphism => "morphism",
            Kind::Model => "model",
            Kind::KanModel => "kan_model",
            Kind::Trace => "trace",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `name: source -> target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// A finitely presented category. Paths list arrow names in applicative
/// order (`["g", "f"]` is `g ∘ f`); `["1_x"]` is the identity on `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    #[serde(default)]
    pub relations: Vec<[Vec<String>; 2]>,
    /// Longest path enumerated while closing the presentation.
    pub path_bound: usize,
}

/// A category by its full table. Identities are implicit and named
/// `1_<object>`; `composition` lists `[f, g, g∘f]` for non-identity pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<ArrowDoc>,
    #[serde(default)]
    pub composition: Vec<[String; 3]>,
}

/// A base category, inline or as a path to a presentation or category file
/// (relative to the referencing file).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseDoc {
    Ref(String),
    Presentation(PresentationDoc),
    Category(CategoryDoc),
}

/// `element -> element`.
pub type Table = BTreeMap<String, String>;

/// Elements per object, and the action of each generating morphism
/// `f: c -> c'` as a table from `X(c')` to `X(c)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafBody {
    pub sets: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub actions: BTreeMap<String, Table>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafDoc {
    pub base: BaseDoc,
    pub sets: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub actions: BTreeMap<String, Table>,
}

impl PresheafDoc {
    pub fn new(base: BaseDoc, body: PresheafBody) -> PresheafDoc {
        PresheafDoc { base, sets: body.sets, actions: body.actions }
    }

    pub fn body(&self) -> PresheafBody {
        PresheafBody { sets: self.sets.clone(), actions: self.actions.clone() }
    }
}

/// A natural transformation with both endpoints spelled out; components
/// are keyed by object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismBody {
    pub source: PresheafBody,
    pub target: PresheafBody,
    pub components: BTreeMap<String, Table>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub base: BaseDoc,
    pub source: PresheafBody,
    pub target: PresheafBody,
    pub components: BTreeMap<String, Table>,
}

impl MorphismDoc {
    pub fn new(base: BaseDoc, body: MorphismBody) -> MorphismDoc {
        MorphismDoc { base, source: body.source, target: body.target, components: body.components }
    }

    pub fn body(&self) -> MorphismBody {
        MorphismBody { source: self.source.clone(), target: self.target.clone(), components: self.components.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionDoc {
    pub name: String,
    pub source: PresheafBody,
    pub target: PresheafBody,
    pub components: BTreeMap<String, Table>,
}

impl ConditionDoc {
    pub fn body(&self) -> MorphismBody {
        MorphismBody { source: self.source.clone(), target: self.target.clone(), components: self.components.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub base: BaseDoc,
    #[serde(default)]
    pub conditions: Vec<ConditionDoc>,
}

/// `F: C -> psh(D)` by the image of each object and of each generating
/// morphism of `C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KanModelDoc {
    pub source: BaseDoc,
    pub target: BaseDoc,
    pub objects: BTreeMap<String, PresheafBody>,
    #[serde(default)]
    pub generators: BTreeMap<String, BTreeMap<String, Table>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionDoc {
    /// Witnesses as rank tables: for each witness, for each object of the
    /// base in order, the rank of the image of each element.
    Move {
        kind: String,
        condition: usize,
        witnesses: Vec<Vec<Vec<usize>>>,
    },
    SaturateDomain,
    SaturateCodomain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub action: ActionDoc,
    /// Digest of the configuration after the step.
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDoc {
    pub model: ModelDoc,
    pub initial: MorphismBody,
    pub initial_digest: String,
    pub steps: Vec<StepDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Presentation(PresentationDoc),
    Category(CategoryDoc),
    Presheaf(PresheafDoc),
    Morphism(MorphismDoc),
    Model(ModelDoc),
    KanModel(KanModelDoc),
    Trace(TraceDoc),
}

#[derive(Deserialize)]
struct Header {
    format_version: String,
    kind: Kind,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Typed<P> {
    #[allow(dead_code)]
    format_version: String,
    #[allow(dead_code)]
    kind: Kind,
    payload: P,
}

#[derive(Serialize)]
struct Envelope<'a, P> {
    format_version: &'a str,
    kind: Kind,
    payload: &'a P,
}

fn parse_error(origin: &str, e: serde_json::Error) -> WorkbenchError {
    WorkbenchError::Parse(ParseError {
        origin: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn check_version(origin: &str, v: &str) -> Result<(), WorkbenchError> {
    let parts: Vec<&str> = v.split('.').collect();
    let numeric = parts.len() == 3 && parts.iter().all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()));
    if !numeric {
        return Err(WorkbenchError::Version(format!("{origin}: `{v}` is not a semantic version")));
    }
    if parts[0].parse::<u64>().ok() != Some(SUPPORTED_MAJOR) {
        return Err(WorkbenchError::Version(format!(
            "{origin}: format {v} is not supported (major {SUPPORTED_MAJOR})"
        )));
    }
    Ok(())
}

fn typed<P: DeserializeOwned>(origin: &str, text: &str) -> Result<P, WorkbenchError> {
    serde_json::from_str::<Typed<P>>(text).map(|t| t.payload).map_err(|e| parse_error(origin, e))
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::Presentation(_) => Kind::Presentation,
            Document::Category(_) => Kind::Category,
            Document::Presheaf(_) => Kind::Presheaf,
            Document::Morphism(_) => Kind::Morphism,
            Document::Model(_) => Kind::Model,
            Document::KanModel(_) => Kind::KanModel,
            Document::Trace(_) => Kind::Trace,
        }
    }

    /// Parses a document; `origin` names the input in error messages.
    pub fn parse(origin: &str, text: &str) -> Result<Document, WorkbenchError> {
        let header: Header = serde_json::from_str(text).map_err(|e| parse_error(origin, e))?;
        check_version(origin, &header.format_version)?;
        Ok(match header.kind {
            Kind::Presentation => Document::Presentation(typed(origin, text)?),
            Kind::Category => Document::Category(typed(origin, text)?),
            Kind::Presheaf => Document::Presheaf(typed(origin, text)?),
            Kind::Morphism => Document::Morphism(typed(origin, text)?),
            Kind::Model => Document::Model(typed(origin, text)?),
            Kind::KanModel => Document::KanModel(typed(origin, text)?),
            Kind::Trace => Document::Trace(typed(origin, text)?),
        })
    }

    /// Parses a document from an already-decoded JSON value.
    pub fn from_value(origin: &str, value: serde_json::Value) -> Result<Document, WorkbenchError> {
        Document::parse(origin, &value.to_string())
    }

    /// Canonical text: two-space indentation, fields in declaration order,
    /// map keys sorted, trailing newline.
    pub fn to_canonical(&self) -> String {
        let mut s = match self {
            Document::Presentation(p) => envelope(Kind::Presentation, p),
            Document::Category(p) => envelope(Kind::Category, p),
            Document::Presheaf(p) => envelope(Kind::Presheaf, p),
            Document::Morphism(p) => envelope(Kind::Morphism, p),
            Document::Model(p) => envelope(Kind::Model, p),
            Document::KanModel(p) => envelope(Kind::KanModel, p),
            Document::Trace(p) => envelope(Kind::Trace, p),
        };
        s.push('\n');
        s
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::from_str(&self.to_canonical()).expect("canonical text is JSON")
    }

    pub fn expect_kind(self, kind: Kind) -> Result<Document, WorkbenchError> {
        if self.kind() == kind {
            Ok(self)
        } else {
            Err(WorkbenchError::KindMismatch { expected: kind, found: self.kind() })
        }
    }
}

fn envelope<P: Serialize>(kind: Kind, payload: &P) -> String {
    serde_json::to_string_pretty(&Envelope { format_version: FORMAT_VERSION, kind, payload })
        .expect("documents serialize")
}
