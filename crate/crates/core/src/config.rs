//! Pipeline configuration. Defaults reproduce the published operating
//! point: `T_fixed = 20`, `T_min = 100`, blocks of `W/64 x 2`,
//! `H_TH = H/60`, `W_TH = W/40`, `A_TH = W*H/1500`, `B_TH = H/100`,
//! `L_TH = W/40`, aspect window (1.2, 32) and fill-ratio window (5, 90)
//! percent.

use serde::{Deserialize, Serialize};

use crate::background::{BackgroundParams, SpreadStatistic};
use crate::components::Connectivity;
use crate::region::RegionArea;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub t_fixed: i32,
    pub t_min: u8,
    pub width_divisor: u32,
    pub block_height: u32,
    pub spread_statistic: SpreadStatistic,
    pub connectivity: Connectivity,
    pub ra_region: RegionArea,
    pub h_th_div: f64,
    pub w_th_div: f64,
    pub a_th_div: f64,
    pub b_th_div: f64,
    pub l_th_div: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub ra_min: f64,
    pub ra_max: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            t_fixed: 20,
            t_min: 100,
            width_divisor: 64,
            block_height: 2,
            spread_statistic: SpreadStatistic::Range,
            connectivity: Connectivity::Eight,
            ra_region: RegionArea::Blocks,
            h_th_div: 60.0,
            w_th_div: 40.0,
            a_th_div: 1500.0,
            b_th_div: 100.0,
            l_th_div: 40.0,
            r_min: 1.2,
            r_max: 32.0,
            ra_min: 5.0,
            ra_max: 90.0,
        }
    }
}

impl PipelineConfig {
    pub fn background_params(&self) -> BackgroundParams {
        BackgroundParams {
            t_fixed: self.t_fixed,
            t_min: self.t_min,
            width_divisor: self.width_divisor,
            block_height: self.block_height,
            spread_statistic: self.spread_statistic,
        }
    }
}
