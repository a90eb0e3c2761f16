//! The interactive loop: a session alternates designer and agent selection
//! rounds over a GA run until `max_iterations` rounds are done.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::eval::{playability_with, PlayabilityReport};
use crate::evo::{init_population, next_generation, Candidate, GaParams, Generation};
use crate::intent::{agent_select, should_agent_act, train, AgentPolicy, DecisionTree, Label, TrainingSample};
use crate::map::level::{LevelDocument, LevelMeta};
use crate::map::{FeatureVector, MapGenome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    Human,
    Agent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Active,
    Finished,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Turn {
    Human,
    Agent,
    Finished,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub generation: usize,
    pub selector: Selector,
    pub selected: [usize; 2],
}

/// Everything needed to replay a session: its configuration and the ordered selections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub params: GaParams,
    pub policy: AgentPolicy,
    pub selections: Vec<HistoryEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    pub id: String,
    pub params: GaParams,
    pub policy: AgentPolicy,
    pub current: Generation,
    pub history: Vec<HistoryEntry>,
    pub corpus: Vec<TrainingSample>,
    pub tree: Option<DecisionTree>,
    pub status: Status,
}

/// Per-candidate payload of a session view.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateView {
    pub id: usize,
    pub layout: LevelDocument,
    pub features: FeatureVector,
    pub playability: PlayabilityReport,
    pub gate_warning: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub status: Status,
    pub turn: Turn,
    pub generation: usize,
    pub max_iterations: usize,
    pub parent_ids: Option<[usize; 2]>,
    pub history: Vec<HistoryEntry>,
    pub corpus_size: usize,
    pub candidates: Vec<CandidateView>,
}

/// On-disk form: genomes only, layouts are re-decoded on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PersistedSession {
    pub format: String,
    pub id: String,
    pub params: GaParams,
    pub policy: AgentPolicy,
    pub generation: usize,
    pub parent_ids: Option<[usize; 2]>,
    pub genomes: Vec<MapGenome>,
    pub gate_warnings: Vec<bool>,
    pub history: Vec<HistoryEntry>,
    pub corpus: Vec<TrainingSample>,
    pub tree: Option<DecisionTree>,
    pub status: Status,
}

const PERSIST_FORMAT: &str = "ufg-session/1";

impl Session {
    pub fn new(id: impl Into<String>, params: GaParams, policy: AgentPolicy) -> Result<Self> {
        params.validate()?;
        policy.validate()?;
        Ok(Self {
            id: id.into(),
            params,
            policy,
            current: init_population(&params)?,
            history: Vec::new(),
            corpus: Vec::new(),
            tree: None,
            status: Status::Active,
        })
    }

    pub fn human_rounds(&self) -> usize {
        self.history.iter().filter(|h| h.selector == Selector::Human).count()
    }

    pub fn turn(&self) -> Turn {
        if self.status == Status::Finished {
            Turn::Finished
        } else if self.tree.is_some() && should_agent_act(&self.policy, self.current.index, self.corpus.len()) {
            Turn::Agent
        } else {
            Turn::Human
        }
    }

    fn step(&mut self, selector: Selector, selected: [usize; 2]) -> Result<()> {
        let next = next_generation(&self.current, selected, &self.params)?;
        self.history.push(HistoryEntry { generation: self.current.index, selector, selected });
        self.current = next;
        if self.current.index >= self.params.max_iterations {
            self.status = Status::Finished;
        }
        Ok(())
    }

    fn ensure_active(&self) -> Result<()> {
        match self.status {
            Status::Active => Ok(()),
            Status::Finished => Err(Error::State(format!("session {} is finished", self.id))),
        }
    }

    /// One designer round: records 2 preferred and 7 rejected samples, steps
    /// the GA and retrains the intent tree. Does not run agent rounds.
    pub fn apply_human(&mut self, selected: [usize; 2]) -> Result<()> {
        self.ensure_active()?;
        if self.turn() == Turn::Agent {
            return Err(Error::WrongTurn);
        }
        let generation = self.current.index;
        let samples: Vec<TrainingSample> = self
            .current
            .candidates
            .iter()
            .map(|c| TrainingSample {
                features: c.features,
                label: if selected.contains(&c.id) { Label::Preferred } else { Label::Rejected },
                generation,
            })
            .collect();
        self.step(Selector::Human, selected)?;
        self.corpus.extend(samples);
        self.tree = Some(train(&self.corpus)?);
        Ok(())
    }

    /// One agent round, only valid when [`Session::turn`] is `Agent`.
    pub fn apply_agent(&mut self) -> Result<[usize; 2]> {
        self.ensure_active()?;
        if self.turn() != Turn::Agent {
            return Err(Error::State("the current round belongs to the designer".into()));
        }
        let tree = self.tree.as_ref().expect("agent turns require a tree");
        let selected = agent_select(tree, &self.current)?;
        self.step(Selector::Agent, selected)?;
        Ok(selected)
    }

    /// Runs agent rounds until the designer is due or the session finishes.
    pub fn advance_agents(&mut self) -> Result<()> {
        while self.turn() == Turn::Agent {
            self.apply_agent()?;
        }
        Ok(())
    }

    /// A designer submission followed by any scheduled agent rounds.
    pub fn submit_selection(&mut self, selected: [usize; 2]) -> Result<()> {
        self.apply_human(selected)?;
        self.advance_agents()
    }

    pub fn transcript(&self) -> Transcript {
        Transcript { params: self.params, policy: self.policy, selections: self.history.clone() }
    }

    /// Rebuilds a session from its transcript, checking that agent rounds
    /// pick the same candidates again.
    pub fn replay(id: impl Into<String>, transcript: &Transcript) -> Result<Self> {
        let mut session = Self::new(id, transcript.params, transcript.policy)?;
        for entry in &transcript.selections {
            if entry.generation != session.current.index {
                return Err(Error::State(format!("transcript skips to generation {}", entry.generation)));
            }
            match entry.selector {
                Selector::Human => session.apply_human(entry.selected)?,
                Selector::Agent => {
                    let picked = session.apply_agent()?;
                    if picked != entry.selected {
                        return Err(Error::State(format!(
                            "agent replay diverged at generation {}: {picked:?} vs {:?}",
                            entry.generation, entry.selected
                        )));
                    }
                }
            }
        }
        Ok(session)
    }

    pub fn history_digest(&self) -> String {
        let mut hasher = Sha256::new();
        for h in &self.history {
            let who = match h.selector {
                Selector::Human => "human",
                Selector::Agent => "agent",
            };
            hasher.update(format!("{}:{who}:{},{}\n", h.generation, h.selected[0], h.selected[1]));
        }
        hex::encode(hasher.finalize())
    }

    pub fn candidate(&self, id: usize) -> Result<&Candidate> {
        self.current
            .candidate(id)
            .ok_or_else(|| Error::NotFound(format!("candidate {id} in session {}", self.id)))
    }

    pub fn export_level(&self, candidate: usize) -> Result<LevelDocument> {
        let c = self.candidate(candidate)?;
        Ok(LevelDocument::new(&c.layout, self.level_meta(candidate)))
    }

    fn level_meta(&self, candidate: usize) -> LevelMeta {
        LevelMeta {
            session: Some(self.id.clone()),
            generation: Some(self.current.index),
            candidate: Some(candidate),
            selector_digest: Some(self.history_digest()),
            ..LevelMeta::default()
        }
    }

    pub fn view(&self) -> SessionView {
        let candidates = self
            .current
            .candidates
            .iter()
            .map(|c| CandidateView {
                id: c.id,
                layout: LevelDocument::new(&c.layout, self.level_meta(c.id)),
                features: c.features,
                playability: playability_with(&c.layout, &self.params.eval),
                gate_warning: c.gate_warning,
            })
            .collect();
        SessionView {
            id: self.id.clone(),
            status: self.status,
            turn: self.turn(),
            generation: self.current.index,
            max_iterations: self.params.max_iterations,
            parent_ids: self.current.parent_ids,
            history: self.history.clone(),
            corpus_size: self.corpus.len(),
            candidates,
        }
    }

    pub fn to_persisted(&self) -> PersistedSession {
        PersistedSession {
            format: PERSIST_FORMAT.into(),
            id: self.id.clone(),
            params: self.params,
            policy: self.policy,
            generation: self.current.index,
            parent_ids: self.current.parent_ids,
            genomes: self.current.candidates.iter().map(|c| c.genome.clone()).collect(),
            gate_warnings: self.current.candidates.iter().map(|c| c.gate_warning).collect(),
            history: self.history.clone(),
            corpus: self.corpus.clone(),
            tree: self.tree.clone(),
            status: self.status,
        }
    }

    pub fn from_persisted(p: PersistedSession) -> Result<Self> {
        if p.format != PERSIST_FORMAT {
            return Err(Error::State(format!("unsupported session format {:?}", p.format)));
        }
        p.params.validate()?;
        p.policy.validate()?;
        if p.history.len() != p.generation {
            return Err(Error::State("history length does not match generation index".into()));
        }
        let candidates = p
            .genomes
            .into_iter()
            .zip(p.gate_warnings.iter().chain(std::iter::repeat(&false)))
            .enumerate()
            .map(|(id, (genome, &warn))| {
                Candidate::build(id, genome, &p.params).map(|c| Candidate { gate_warning: warn, ..c })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            id: p.id,
            params: p.params,
            policy: p.policy,
            current: Generation { index: p.generation, candidates, parent_ids: p.parent_ids },
            history: p.history,
            corpus: p.corpus,
            tree: p.tree,
            status: p.status,
        })
    }
}
