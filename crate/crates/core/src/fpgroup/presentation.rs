use serde::{Deserialize, Serialize};

use super::word::Word;
use crate::error::{Error, Result};

/// A finite presentation `<generators | relators>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Presentation> {
        for (i, name) in generator_names.iter().enumerate() {
            if name.is_empty() || name.contains(char::is_whitespace) || name.contains('^') {
                return Err(Error::InvalidPresentation(format!(
                    "bad generator name `{name}`"
                )));
            }
            if generator_names[..i].contains(name) {
                return Err(Error::InvalidPresentation(format!(
                    "duplicate generator `{name}`"
                )));
            }
        }
        for (k, r) in relators.iter().enumerate() {
            if let Some(l) = r.letters().iter().find(|l| l.index() >= generator_names.len()) {
                return Err(Error::InvalidPresentation(format!(
                    "relator {k} references undeclared generator index {}",
                    l.index()
                )));
            }
        }
        Ok(Presentation {
            generator_names,
            relators,
        })
    }

    /// Builds a presentation from generator names and relator strings.
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Presentation> {
        let names: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let rels = relators
            .iter()
            .map(|r| Word::parse(r, &names))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(names, rels)
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn with_relators(&self, extra: impl IntoIterator<Item = Word>) -> Presentation {
        let mut p = self.clone();
        p.relators.extend(extra);
        p
    }

    pub fn word(&self, text: &str) -> Result<Word> {
        Word::parse(text, &self.generator_names)
    }

    pub fn render(&self, w: &Word) -> String {
        w.display(&self.generator_names).to_string()
    }
}

/// JSON form of a presentation plus an optional subgroup, e.g.
/// `{"generators": ["a","b"], "relators": ["a^-1 b a b^-2"], "subgroup": ["a"]}`.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct PresentationFile {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<String>,
    #[serde(default)]
    pub subgroup: Vec<String>,
}

impl PresentationFile {
    pub fn from_presentation(p: &Presentation, subgroup: &[Word]) -> PresentationFile {
        PresentationFile {
            generators: p.generator_names.clone(),
            relators: p.relators.iter().map(|r| p.render(r)).collect(),
            subgroup: subgroup.iter().map(|w| p.render(w)).collect(),
        }
    }

    pub fn to_presentation(&self) -> Result<(Presentation, Vec<Word>)> {
        let rels = self
            .relators
            .iter()
            .map(|r| Word::parse(r, &self.generators))
            .collect::<Result<Vec<_>>>()?;
        let p = Presentation::new(self.generators.clone(), rels)?;
        let sub = self
            .subgroup
            .iter()
            .map(|w| Word::parse(w, &self.generators))
            .collect::<Result<Vec<_>>>()?;
        Ok((p, sub))
    }
}
