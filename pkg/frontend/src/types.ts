// Payload shapes of the service API (v1).

export interface TaskItem {
  item_id: string;
  payload: unknown;
}

export interface Task {
  task_id: string;
  kind: "clustering" | "categorization";
  assignments_remaining: number;
  items: TaskItem[];
  pivots?: Record<string, TaskItem[]> | null;
}

export interface SubmissionResult {
  accepted: boolean;
  reason: string | null;
  violations: unknown[] | null;
  duplicate: boolean;
  phase: string;
  task_status: string;
}

export interface OpenTask {
  task_id: string;
  kind: string;
  assignments_remaining: number;
  item_count: number;
}

export interface RunSummary {
  run_id: string;
  phase: string;
  mode: string;
  iteration: number;
  tau: number;
  n_target: number;
  open_tasks: OpenTask[];
}

export interface HierarchyNodeDump {
  node_id: string;
  label: string | null;
  is_pool: boolean;
  item_count: number;
  items: string[] | null;
  children: HierarchyNodeDump[];
}

export interface FrontierNodeReport {
  node_id: string;
  label: string | null;
  is_pool: boolean;
  item_count: number;
  not_split_prob: number | null;
}

export interface RunReport {
  run_id: string;
  phase: string;
  final: boolean;
  iterations_completed: number;
  tau: number;
  covered_items: number;
  corpus_size: number;
  hierarchy: HierarchyNodeDump | null;
  frontier?: {
    log_likelihood: number;
    nodes: FrontierNodeReport[];
  };
  cost: Record<string, number>;
}
