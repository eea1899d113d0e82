//! Balls in the Cayley graph and word-metric distance oracles.

use std::collections::HashMap;
use std::io::Write;

use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::group::MarkedGroup;

/// Default element budget for a single ball.
pub const DEFAULT_BALL_BUDGET: usize = 2_000_000;
/// Default vertex budget for a single matching window.
pub const DEFAULT_MATCHING_BUDGET: usize = 100_000;

/// Resource caps. Exceeding one is an error, never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Limits {
    pub ball_elements: usize,
    pub matching_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            ball_elements: DEFAULT_BALL_BUDGET,
            matching_vertices: DEFAULT_MATCHING_BUDGET,
        }
    }
}

/// All elements of word length at most `radius`, with exact distances.
///
/// Ids are assigned in BFS order (generator order within a layer), so id 0
/// is the identity.
#[derive(Clone, Debug)]
pub struct Ball {
    group: MarkedGroup,
    radius: u32,
    elements: Vec<GroupElement>,
    dist: Vec<u32>,
    index: HashMap<GroupElement, usize>,
}

impl Ball {
    /// BFS from the identity over right multiplication by generators.
    pub fn new(group: &MarkedGroup, radius: u32, budget: usize) -> Result<Ball> {
        let id = group.identity();
        let mut elements = vec![id.clone()];
        let mut dist = vec![0u32];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut layer_start = 0;
        for d in 1..=radius {
            let layer_end = elements.len();
            for i in layer_start..layer_end {
                for t in group.generators() {
                    let next = group.multiply(&elements[i], &t.element);
                    if index.contains_key(&next) {
                        continue;
                    }
                    if elements.len() >= budget {
                        return Err(Error::Budget {
                            what: format!("ball of radius {radius} in {group}"),
                            limit: budget,
                        });
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                    dist.push(d);
                }
            }
            if elements.len() == layer_end {
                break;
            }
            layer_start = layer_end;
        }
        Ok(Ball {
            group: group.clone(),
            radius,
            elements,
            dist,
            index,
        })
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, id: usize) -> &GroupElement {
        &self.elements[id]
    }

    pub fn distance_of(&self, id: usize) -> u32 {
        self.dist[id]
    }

    pub fn id_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    /// Exact word length of `g`; an error if `g` lies outside the ball.
    pub fn word_length(&self, g: &GroupElement) -> Result<u32> {
        self.id_of(g)
            .map(|i| self.dist[i])
            .ok_or_else(|| Error::OutOfWindow {
                element: self.group.format(g),
                radius: self.radius,
            })
    }

    /// Ids of elements at exactly distance `d`.
    pub fn sphere(&self, d: u32) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.dist[i] == d)
    }

    /// CSV dump: `id,normal_form,distance`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["id", "normal_form", "distance"])?;
        for (i, g) in self.elements.iter().enumerate() {
            w.write_record([i.to_string(), self.group.format(g), self.dist[i].to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Exact word-metric distances `d(x,y) = |x⁻¹y|`.
///
/// Uses the closed-form word length when the family has one and a BFS ball
/// of the configured reach otherwise (BS(1,m)).
#[derive(Clone, Debug)]
pub struct WordMetric {
    group: MarkedGroup,
    ball: Option<Ball>,
    reach: u32,
}

impl WordMetric {
    /// A metric able to measure distances up to `reach`.
    pub fn new(group: &MarkedGroup, reach: u32, budget: usize) -> Result<WordMetric> {
        let ball = if group.has_closed_form_length() {
            None
        } else {
            Some(Ball::new(group, reach, budget)?)
        };
        Ok(WordMetric {
            group: group.clone(),
            ball,
            reach,
        })
    }

    pub fn from_ball(ball: Ball) -> WordMetric {
        WordMetric {
            group: ball.group().clone(),
            reach: ball.radius(),
            ball: Some(ball),
        }
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn reach(&self) -> u32 {
        self.reach
    }

    pub fn length(&self, g: &GroupElement) -> Result<u32> {
        if self.group.has_closed_form_length() {
            return self
                .group
                .closed_form_length(g)
                .map(|l| l as u32)
                .ok_or_else(|| Error::OutOfWindow {
                    element: self.group.format(g),
                    radius: self.reach,
                });
        }
        self.ball.as_ref().expect("BS metric has a ball").word_length(g)
    }

    pub fn distance(&self, x: &GroupElement, y: &GroupElement) -> Result<u32> {
        let diff = self.group.multiply(&self.group.inverse(x), y);
        self.length(&diff)
    }
}

/// Builds the ball of radius `r` with the default budget.
pub fn ball(group: &MarkedGroup, r: u32) -> Result<Ball> {
    Ball::new(group, r, DEFAULT_BALL_BUDGET)
}
