//! Design-intent agent: a gain-ratio decision tree learned from the
//! designer's selections, and the schedule on which it selects instead.

mod agent;
mod tree;

pub use agent::{agent_select, should_agent_act, AgentPolicy};
pub use tree::{classify, gain_ratio, train, DecisionTree, Label, Node, TrainingSample, MAX_DEPTH};
