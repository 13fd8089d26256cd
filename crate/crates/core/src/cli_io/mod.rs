//! Scene files, rasterization, exports and scene execution for the `hcifs`
//! command-line tool.

mod raster;
mod run;
mod scene;

pub use raster::{csv_string, format_g17, pgm_bytes, project, rasterize, write_csv, write_pgm, Raster};
pub use run::{lipschitz_report, run_scene, DepthRun, LipschitzReport, MapLipschitz, RunReport};
pub use scene::{
    parse_scene, scene_from_value, AlgebraSpec, EngineSpec, MapSpec, MonomialSpec, Mode,
    OutputSpec, ParavectorSpec, SandwichSpec, SceneConfig, ScheduleSpec, TermSpec,
};
