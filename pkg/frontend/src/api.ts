// Thin client for the service API. Submission ids are derived from the run,
// task and worker, so a retried submission is recognized server-side and the
// console can safely re-send after transient failures.

import type { RunReport, RunSummary, SubmissionResult, Task } from "./types.js";

const API = "/api/v1";

export function submissionIdFor(runId: string, taskId: string, workerId: string): string {
  return `console:${runId}:${taskId}:${workerId}`;
}

async function parse<T>(response: Response): Promise<T> {
  if (!response.ok) {
    const body = await response.text();
    throw new Error(`HTTP ${response.status}: ${body.slice(0, 300)}`);
  }
  return (await response.json()) as T;
}

export class QuorumApi {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: typeof fetch = fetch,
    private readonly retries: number = 2,
  ) {}

  private url(path: string): string {
    return `${this.base}${API}${path}`;
  }

  private async withRetry<T>(attempt: () => Promise<T>): Promise<T> {
    let lastError: unknown;
    for (let i = 0; i <= this.retries; i++) {
      try {
        return await attempt();
      } catch (err) {
        lastError = err;
      }
    }
    throw lastError;
  }

  async summary(runId: string): Promise<RunSummary> {
    const r = await this.fetchFn(this.url(`/runs/${runId}`));
    return parse<RunSummary>(r);
  }

  async report(runId: string): Promise<RunReport> {
    const r = await this.fetchFn(this.url(`/runs/${runId}/report`));
    return parse<RunReport>(r);
  }

  async nextTask(runId: string, workerId: string): Promise<Task | null> {
    const r = await this.fetchFn(
      this.url(`/runs/${runId}/task?worker_id=${encodeURIComponent(workerId)}`),
    );
    const env = await parse<{ task: Task | null }>(r);
    return env.task;
  }

  // Retries reuse the same submission id: the server treats duplicates as
  // acknowledgements of the original outcome.
  async submitClustering(
    runId: string,
    taskId: string,
    workerId: string,
    clusters: string[][],
  ): Promise<SubmissionResult> {
    const body = JSON.stringify({
      worker_id: workerId,
      submission_id: submissionIdFor(runId, taskId, workerId),
      clusters,
    });
    return this.withRetry(async () => {
      const r = await this.fetchFn(this.url(`/runs/${runId}/tasks/${taskId}/clustering`), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body,
      });
      return parse<SubmissionResult>(r);
    });
  }

  async submitCategorization(
    runId: string,
    taskId: string,
    workerId: string,
    assignments: Record<string, string | null>,
  ): Promise<SubmissionResult> {
    const body = JSON.stringify({
      worker_id: workerId,
      submission_id: submissionIdFor(runId, taskId, workerId),
      assignments,
    });
    return this.withRetry(async () => {
      const r = await this.fetchFn(this.url(`/runs/${runId}/tasks/${taskId}/categorization`), {
        method: "POST",
        headers: { "content-type": "application/json" },
        body,
      });
      return parse<SubmissionResult>(r);
    });
  }
}
