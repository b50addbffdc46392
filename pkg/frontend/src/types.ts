// Wire contract shared with the session service.  These mirror the
// published payloads exactly; the UI never invents fields of its own.

export interface InstanceInfo {
  name: string;
  dimension: number;
  edge_weight_type: string;
}

export interface SteeringEntry {
  from: number;
  to: number;
  p: number;
}

export interface BlockedEdge {
  from: number;
  to: number;
}

export interface SteeringDoc {
  hif: number;
  entries: SteeringEntry[];
  blocked: BlockedEdge[];
  version: number;
}

export interface OptimumDoc {
  order: number[];
  length: number;
  method: string;
}

export interface Snapshot {
  session_id: string;
  status: "CREATED" | "RUNNING" | "PAUSED" | "FINISHED";
  iteration: number;
  total_iterations: number;
  instance: {
    name: string;
    dimension: number;
    coordinates: number[][] | null;
  };
  best: {
    order: number[];
    length: number;
    iteration_found: number;
    ant_index: number;
  };
  pheromone: {
    tau0: number;
    min: number;
    max: number;
    matrix: number[][];
  };
  steering: SteeringDoc;
  running_steering_version: number;
  optimum: OptimumDoc | null;
  gap_percent: number | null;
}

// Per-iteration progress event; aux events carry a "type" discriminator
// instead (fallback, infeasible) and are surfaced in the activity log.
export interface IterationEvent {
  iteration: number;
  best_length: number;
  improved: boolean;
  steering_version: number;
}

export interface WireFrame {
  kind: "SNAPSHOT" | "EVENT" | "STEERING_ACK" | "ERROR";
  session_id: string;
  payload: Record<string, unknown>;
  sequence: number;
}

// Delta document accepted by the steering_update control action.
export interface SteeringUpdate {
  hif?: number;
  entries?: SteeringEntry[];
  block?: BlockedEdge[];
  unblock?: BlockedEdge[];
}

export interface ResultDoc {
  best_order: number[];
  best_length: number;
  seed: number;
  params: Record<string, unknown>;
  steering_versions: number[];
  optimum?: OptimumDoc;
  gap_percent?: number;
}
