//! The bundled example models.

use crate::amf::load_model;
use crate::model::Model;

pub const M1: &str = include_str!("../fixtures/m1.amf");
pub const M2: &str = include_str!("../fixtures/m2.amf");
pub const CG_ONEROUND: &str = include_str!("../fixtures/cg_oneround.amf");
pub const CG_REPEAT: &str = include_str!("../fixtures/cg_repeat.amf");
pub const CG_REPEAT_FAIR: &str = include_str!("../fixtures/cg_repeat_fair.amf");

fn load(name: &str, text: &str) -> Model {
    load_model(text).unwrap_or_else(|e| panic!("bundled fixture {name} is invalid: {e}"))
}

pub fn m1() -> Model {
    load("m1", M1)
}

pub fn m2() -> Model {
    load("m2", M2)
}

pub fn cg_oneround() -> Model {
    load("cg_oneround", CG_ONEROUND)
}

pub fn cg_repeat() -> Model {
    load("cg_repeat", CG_REPEAT)
}

pub fn cg_repeat_fair() -> Model {
    load("cg_repeat_fair", CG_REPEAT_FAIR)
}

/// Every fixture with its file stem.
pub fn all() -> Vec<(&'static str, Model)> {
    vec![
        ("m1", m1()),
        ("m2", m2()),
        ("cg_oneround", cg_oneround()),
        ("cg_repeat", cg_repeat()),
        ("cg_repeat_fair", cg_repeat_fair()),
    ]
}
