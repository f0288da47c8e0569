//! Tracker episode environment: spawn on a sampled reference frame, track
//! the fragment to its end at 50 Hz, fail on large non-wrist error.

use std::sync::Arc;

use super::obs::build_tracker_obs;
use super::perturb::WristPerturber;
use super::reward::{tracking_error_sq, tracking_reward};
use super::TrackerConfig;
use crate::error::Result;
use crate::motion::{sample_reference, FragmentLibrary, MotionFrame};
use crate::num::rng::{derive_rng, stream, Rng64};
use crate::rl::rollout::{Env, StepOut, Termination};
use crate::sim::agent::{command_to_targets, step_agent, AgentState, N_JOINTS, WRIST};
use crate::sim::{DynamicsParams, SimConfig, CTRL_DT, SIM_DT, SUBSTEPS};

pub struct TrackerEnv {
    lib: Arc<FragmentLibrary>,
    cfg: TrackerConfig,
    sim: SimConfig,
    rng: Rng64,
    agent: AgentState,
    dynamics: DynamicsParams,
    perturber: WristPerturber,
    frag: usize,
    frame: usize,
    prev_action: Vec<f64>,
}

impl TrackerEnv {
    pub fn new(
        lib: Arc<FragmentLibrary>,
        cfg: TrackerConfig,
        sim: SimConfig,
        seed: u64,
        index: usize,
    ) -> Self {
        let perturber = WristPerturber::new(cfg.perturber.clone());
        let action_dim = cfg.action_dim();
        Self {
            lib,
            cfg,
            sim,
            rng: derive_rng(seed, &[stream::ENV, index as u64]),
            agent: AgentState::at_ready(6.0, 0.0),
            dynamics: DynamicsParams::nominal(),
            perturber,
            frag: 0,
            frame: 0,
            prev_action: vec![0.0; action_dim],
        }
    }

    fn target_frame(&self) -> &MotionFrame {
        &self.lib.fragments[self.frag].frames[self.frame + 1]
    }

    /// Executed wrist PD target for the current control step.
    pub fn wrist_source(&self) -> f64 {
        self.perturber.value
    }

    pub fn agent(&self) -> &AgentState {
        &self.agent
    }
}

impl Env for TrackerEnv {
    fn obs_dim(&self) -> usize {
        super::obs::TRACKER_OBS_DIM
    }

    fn action_dim(&self) -> usize {
        self.cfg.action_dim()
    }

    fn reset(&mut self) -> Vec<f64> {
        let (frag, start) = sample_reference(&self.lib, &mut self.rng);
        self.frag = frag;
        self.frame = start;
        let f0 = &self.lib.fragments[frag].frames[start];
        self.agent = AgentState { q: f0.q_ref, qd: f0.qd_ref, last_action: [0.0; N_JOINTS] };
        self.dynamics = if self.cfg.randomize_dynamics {
            DynamicsParams::sample(&mut self.rng, &self.sim.rand)
        } else {
            DynamicsParams::nominal()
        };
        self.perturber.reset(&mut self.rng);
        self.prev_action = vec![0.0; self.cfg.action_dim()];
        build_tracker_obs(&self.agent, self.target_frame())
    }

    fn step(&mut self, action: &[f64]) -> Result<StepOut> {
        let wrist = if self.cfg.include_wrist {
            None
        } else {
            Some(self.perturber.value)
        };
        let targets =
            command_to_targets(&self.agent.q, action, wrist, &self.sim.joints, self.sim.base_delta_limit);
        for _ in 0..SUBSTEPS {
            step_agent(&mut self.agent, &targets, &self.sim.joints, &self.dynamics, SIM_DT)?;
        }
        self.agent.last_action = targets;
        if !self.cfg.include_wrist {
            self.perturber.step(CTRL_DT, &mut self.rng);
        }
        self.frame += 1;
        let frames = &self.lib.fragments[self.frag].frames;
        let target = &frames[self.frame];
        let reward = tracking_reward(&self.agent, target, action, &self.prev_action, &self.cfg);
        self.prev_action = action.to_vec();
        let (eq, _) = tracking_error_sq(&self.agent, target, false);
        let failed = eq.sqrt() > self.cfg.failure_threshold;
        let at_end = self.frame + 1 >= frames.len();
        let done = if failed {
            Some(Termination::Failure)
        } else if at_end {
            Some(Termination::Timeout)
        } else {
            None
        };
        let obs_frame = if at_end { &frames[self.frame] } else { &frames[self.frame + 1] };
        let obs = build_tracker_obs(&self.agent, obs_frame);
        Ok(StepOut { obs, reward, done })
    }
}

/// Wiring details used by tests and the distillation stage.
impl TrackerEnv {
    pub fn current_reference(&self) -> (&MotionFrame, usize, usize) {
        (&self.lib.fragments[self.frag].frames[self.frame], self.frag, self.frame)
    }

    pub fn last_executed_targets(&self) -> [f64; N_JOINTS] {
        self.agent.last_action
    }
}
