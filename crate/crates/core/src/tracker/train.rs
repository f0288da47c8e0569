//! Tracker PPO training and deterministic evaluation.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::env::TrackerEnv;
use super::perturb::WristPerturber;
use super::reward::tracking_error_sq;
use super::TrackerConfig;
use crate::error::Result;
use crate::motion::{FragmentLibrary, Skill};
use crate::num::checkpoint::Checkpoint;
use crate::num::rng::{derive_rng, stream};
use crate::rl::policy::{ActorCritic, TrainState};
use crate::rl::rollout::{collect_rollouts, make_slots};
use crate::rl::update::{update_policy, UpdateMetrics};
use crate::rl::PPOConfig;
use crate::sim::agent::{command_to_targets, step_agent, AgentState, N_JOINTS, WRIST};
use crate::sim::{DynamicsParams, SimConfig, CTRL_DT, SIM_DT, SUBSTEPS};

pub const CKPT_KIND: &str = "tracker";

/// Per-skill tracking errors, non-wrist joints only.
#[derive(Debug, Clone, Serialize)]
pub struct TrackingReport {
    /// skill name → (mean |q − q_ref|, max |q − q_ref|) over frames/joints.
    pub per_skill: BTreeMap<String, (f64, f64)>,
    pub mean_error: f64,
    pub wrist_column: &'static str,
}

pub fn train_tracker(
    lib: &Arc<FragmentLibrary>,
    cfg: &TrackerConfig,
    sim: &SimConfig,
    ppo: &PPOConfig,
    seed: u64,
    mut on_update: impl FnMut(usize, &UpdateMetrics, f64),
) -> Result<TrainState> {
    ppo.validate()?;
    let obs_dim = super::obs::TRACKER_OBS_DIM;
    let mut init_rng = derive_rng(seed, &[stream::POLICY_INIT]);
    let ac = ActorCritic::init(obs_dim, cfg.action_dim(), &ppo.hidden, ppo.log_std_init, &mut init_rng)?;
    let mut state = TrainState::new(ac, ppo.learning_rate);
    let mut slots = make_slots(ppo.env_count, seed, |i| {
        TrackerEnv::new(lib.clone(), cfg.clone(), sim.clone(), seed, i)
    });
    for u in 0..ppo.updates {
        let batch = collect_rollouts(&mut slots, &state.ac, ppo)?;
        let metrics = update_policy(&mut state, &batch, ppo, seed, u as u64)?;
        on_update(u, &metrics, batch.mean_reward);
    }
    Ok(state)
}

/// Deterministic (mean-action) evaluation over every fragment of `lib`,
/// perturber active, fixed seed. Errors cover the non-wrist joints; the
/// wrist column of the report is marked excluded.
pub fn evaluate_tracking(
    ac: &ActorCritic,
    lib: &FragmentLibrary,
    cfg: &TrackerConfig,
    sim: &SimConfig,
    seed: u64,
) -> Result<TrackingReport> {
    let mut per_skill: BTreeMap<String, (f64, f64, usize)> = BTreeMap::new();
    let mut rng = derive_rng(seed, &[stream::EVAL]);
    for frag in &lib.fragments {
        let mut agent = AgentState {
            q: frag.frames[0].q_ref,
            qd: frag.frames[0].qd_ref,
            last_action: [0.0; N_JOINTS],
        };
        let mut perturber = WristPerturber::new(cfg.perturber.clone());
        perturber.reset(&mut rng);
        let dynamics = DynamicsParams::nominal();
        let entry = per_skill.entry(frag.skill.name().to_string()).or_insert((0.0, 0.0, 0));
        for t in 0..frag.frames.len() - 1 {
            let obs = super::obs::build_tracker_obs(&agent, &frag.frames[t + 1]);
            let action = ac.mean_action(&obs)?;
            let wrist = if cfg.include_wrist { None } else { Some(perturber.value) };
            let targets =
                command_to_targets(&agent.q, &action, wrist, &sim.joints, sim.base_delta_limit);
            for _ in 0..SUBSTEPS {
                step_agent(&mut agent, &targets, &sim.joints, &dynamics, SIM_DT)?;
            }
            agent.last_action = targets;
            if !cfg.include_wrist {
                perturber.step(CTRL_DT, &mut rng);
            }
            let target = &frag.frames[t + 1];
            for j in 0..WRIST {
                let e = (agent.q[j] - target.q_ref[j]).abs();
                entry.0 += e;
                entry.1 = entry.1.max(e);
                entry.2 += 1;
            }
        }
    }
    let mut report = TrackingReport {
        per_skill: BTreeMap::new(),
        mean_error: 0.0,
        wrist_column: "excluded",
    };
    let mut total = 0.0;
    let mut count = 0usize;
    for (skill, (sum, max, n)) in per_skill {
        report.per_skill.insert(skill, (sum / n as f64, max));
        total += sum;
        count += n;
    }
    report.mean_error = total / count.max(1) as f64;
    Ok(report)
}

/// Mean non-wrist error of a policy on a library; convenience wrapper used
/// by acceptance tests.
pub fn mean_tracking_error(
    ac: &ActorCritic,
    lib: &FragmentLibrary,
    cfg: &TrackerConfig,
    sim: &SimConfig,
    seed: u64,
) -> Result<f64> {
    Ok(evaluate_tracking(ac, lib, cfg, sim, seed)?.mean_error)
}

/// Bundle a trained tracker into the checkpoint container.
pub fn tracker_checkpoint(state: &TrainState, cfg: &TrackerConfig, seed: u64) -> Checkpoint {
    let meta = serde_json::json!({
        "stage": CKPT_KIND,
        "include_wrist": cfg.include_wrist,
        "obs_dim": super::obs::TRACKER_OBS_DIM,
        "action_dim": cfg.action_dim(),
        "seed": seed,
    });
    let mut ck = Checkpoint::new(CKPT_KIND, meta);
    ck.push_net("policy", state.ac.policy.clone(), Some(state.opt_policy.clone()));
    ck.push_net("value", state.ac.value.clone(), Some(state.opt_value.clone()));
    ck.push_vector("log_std", state.ac.log_std.clone());
    ck
}

/// Rebuild the actor-critic from a checkpoint.
pub fn tracker_from_checkpoint(ck: &Checkpoint) -> Result<(ActorCritic, bool)> {
    ck.expect_kind(CKPT_KIND)?;
    let include_wrist = ck.meta["include_wrist"].as_bool().unwrap_or(false);
    let ac = ActorCritic {
        policy: ck.net("policy")?.params.clone(),
        log_std: ck.vector("log_std")?.clone(),
        value: ck.net("value")?.params.clone(),
    };
    Ok((ac, include_wrist))
}
