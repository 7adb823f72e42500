#![allow(dead_code)]

pub mod isotropy;
