/** Frozen responses captured from the live service (seed 7, n=2000);
 *  the shapes below are the real wire format of the HTTP API. */

import type { CostResponse, FrontierPoint, ModelsDescriptor } from "../src/types.js";

export const MODELS_FIXTURE: ModelsDescriptor = {
  "service_version": "0.1.0",
  "scenario_cap": 200000,
  "models": [
    {
      "name": "black-scholes",
      "parameters": {
        "mu": {
          "description": "stock drift per year",
          "default": 0.03
        },
        "sigma": {
          "description": "volatility per sqrt(year)",
          "min_exclusive": 0.0,
          "default": 0.3
        },
        "r": {
          "description": "risk-free rate per year",
          "default": 0.02
        },
        "s0": {
          "description": "initial stock price",
          "min_exclusive": 0.0,
          "default": 1.0
        },
        "horizon_T": {
          "description": "horizon in years",
          "min_exclusive": 0.0,
          "default": 10.0
        }
      }
    },
    {
      "name": "cev",
      "parameters": {
        "mu": {
          "description": "stock drift per year",
          "default": 0.03
        },
        "sigma": {
          "description": "volatility scale",
          "min_exclusive": 0.0,
          "default": 0.3
        },
        "r": {
          "description": "risk-free rate per year",
          "default": 0.02
        },
        "s0": {
          "description": "initial stock price",
          "min_exclusive": 0.0,
          "default": 1.0
        },
        "horizon_T": {
          "description": "horizon in years",
          "min_exclusive": 0.0,
          "default": 10.0
        },
        "beta": {
          "description": "elasticity exponent",
          "min_exclusive": -0.5,
          "max_exclusive": 0.0,
          "default": -0.25
        },
        "n_steps": {
          "description": "path discretization steps",
          "min": 1,
          "default": 1000
        }
      }
    }
  ],
  "alpha": {
    "description": "Clayton dependence parameter",
    "min": -1.0,
    "exclude": [
      0.0
    ],
    "default": 20.0
  },
  "defaults": {
    "mu": 0.03,
    "sigma": 0.3,
    "r": 0.02,
    "n_periods": 10,
    "budget": 1000.0
  }
} as ModelsDescriptor;

export const COST_FIXTURE: CostResponse = {
  "cost": 794.8222982088386,
  "std_error": 4.93779923339485,
  "per_period_mean": 100.0,
  "seed": 7,
  "request": {
    "model": "black-scholes",
    "mu": 0.03,
    "sigma": 0.3,
    "r": 0.02,
    "s0": 1.0,
    "horizon_T": 10.0,
    "beta": -0.25,
    "n_steps": 1000,
    "alpha": 20.0,
    "mean": 100.0,
    "std": 40.0,
    "n_periods": 10,
    "n_scenarios": 2000,
    "seed": 7
  },
  "scatter": [
    [
      0.5552809264801799,
      2399.3797423911456
    ],
    [
      0.5819622328848709,
      2325.9993874055403
    ],
    [
      0.6067193544769066,
      2204.4955455032177
    ],
    [
      0.6137261021599002,
      2179.86807658059
    ],
    [
      0.6219006644028278,
      2139.9318021799504
    ],
    [
      0.6379441996835669,
      2097.835292310455
    ]
  ]
} as CostResponse;

/** raw NDJSON lines exactly as the frontier stream delivered them */
export const FRONTIER_LINES: string[] = [
  "{\"target_std\": 20.0, \"per_period_mean\": 150.1561766887765, \"achieved_cost\": 1220.8483922329838, \"budget\": 1000.0, \"budget_at_horizon\": 1221.40275816017, \"alpha\": 20.0, \"seed\": 7}",
  "{\"target_std\": 40.0, \"per_period_mean\": 151.89736838023703, \"achieved_cost\": 1220.909511754183, \"budget\": 1000.0, \"budget_at_horizon\": 1221.40275816017, \"alpha\": 20.0, \"seed\": 7}",
  "{\"target_std\": 60.0, \"per_period_mean\": 153.63856007169755, \"achieved_cost\": 1222.0591906092907, \"budget\": 1000.0, \"budget_at_horizon\": 1221.40275816017, \"alpha\": 20.0, \"seed\": 7}"
];

export const FRONTIER_POINTS: FrontierPoint[] = FRONTIER_LINES.map(
  (ln) => JSON.parse(ln) as FrontierPoint,
);
