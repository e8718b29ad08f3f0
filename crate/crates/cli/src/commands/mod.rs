pub mod crossover;
pub mod density;
pub mod evolve;
pub mod figure;
pub mod oracle;
pub mod sweep;
