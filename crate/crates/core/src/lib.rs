pub mod ball;
pub mod bs;
pub mod element;
pub mod error;
pub mod folner;
pub mod group;
pub mod qi;
pub mod chain;
pub mod matching;
pub mod cli;
