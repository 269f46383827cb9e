/** Descriptor-driven input guards: the client never submits values the
 *  service would reject, and every range comes from GET /api/models. */

import type { CostRequest, ModelsDescriptor, ParameterSpec } from "./types.js";

export interface FieldError {
  field: string;
  message: string;
}

export function checkParameter(name: string, value: number, spec: ParameterSpec): FieldError | null {
  if (!Number.isFinite(value)) {
    return { field: name, message: `${name} must be a finite number` };
  }
  if (spec.min !== undefined && value < spec.min) {
    return { field: name, message: `${name} must be >= ${spec.min}` };
  }
  if (spec.max !== undefined && value > spec.max) {
    return { field: name, message: `${name} must be <= ${spec.max}` };
  }
  if (spec.min_exclusive !== undefined && value <= spec.min_exclusive) {
    return { field: name, message: `${name} must be > ${spec.min_exclusive}` };
  }
  if (spec.max_exclusive !== undefined && value >= spec.max_exclusive) {
    return { field: name, message: `${name} must be < ${spec.max_exclusive}` };
  }
  return null;
}

export function checkAlpha(alpha: number, desc: ModelsDescriptor): FieldError | null {
  if (!Number.isFinite(alpha)) {
    return { field: "alpha", message: "alpha must be a finite number" };
  }
  if (alpha < desc.alpha.min) {
    return { field: "alpha", message: `alpha must be >= ${desc.alpha.min}` };
  }
  if (desc.alpha.exclude.includes(alpha)) {
    return {
      field: "alpha",
      message: `alpha = ${alpha} is not allowed (independence limit); pick any other value >= ${desc.alpha.min}`,
    };
  }
  return null;
}

/** Validate a cost request against the live descriptor; empty list = submittable. */
export function validateCostRequest(req: CostRequest, desc: ModelsDescriptor): FieldError[] {
  const errors: FieldError[] = [];
  const model = desc.models.find((m) => m.name === req.model);
  if (!model) {
    errors.push({ field: "model", message: `unknown model ${req.model}` });
    return errors;
  }
  for (const [name, spec] of Object.entries(model.parameters)) {
    const value = (req as unknown as Record<string, number>)[name];
    if (value === undefined) continue;
    const err = checkParameter(name, value, spec);
    if (err) errors.push(err);
  }
  const alphaErr = checkAlpha(req.alpha, desc);
  if (alphaErr) errors.push(alphaErr);
  if (!(req.mean > 0)) errors.push({ field: "mean", message: "mean must be positive" });
  if (!(req.std > 0)) errors.push({ field: "std", message: "std must be positive" });
  if (!(Number.isInteger(req.n_periods) && req.n_periods >= 2)) {
    errors.push({ field: "n_periods", message: "n_periods must be an integer >= 2" });
  }
  if (!(Number.isInteger(req.n_scenarios) && req.n_scenarios >= 100)) {
    errors.push({ field: "n_scenarios", message: "n_scenarios must be an integer >= 100" });
  } else if (req.n_scenarios > desc.scenario_cap) {
    errors.push({
      field: "n_scenarios",
      message: `n_scenarios exceeds the service cap of ${desc.scenario_cap}`,
    });
  }
  return errors;
}
