// Local draft persistence: the board survives a page reload. Falls back to an
// in-memory map where localStorage is unavailable (tests, private browsing).

export interface DraftStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

class MemoryStore implements DraftStore {
  private data = new Map<string, string>();
  getItem(key: string): string | null {
    return this.data.has(key) ? (this.data.get(key) as string) : null;
  }
  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }
  removeItem(key: string): void {
    this.data.delete(key);
  }
}

export function defaultStore(): DraftStore {
  try {
    if (typeof localStorage !== "undefined") {
      return localStorage;
    }
  } catch {
    // fall through
  }
  return new MemoryStore();
}

export function draftKey(runId: string, taskId: string, workerId: string): string {
  return `quorum-draft:${runId}:${taskId}:${workerId}`;
}

export function saveDraft(store: DraftStore, key: string, state: unknown): void {
  store.setItem(key, JSON.stringify(state));
}

export function loadDraft<T>(store: DraftStore, key: string): T | null {
  const raw = store.getItem(key);
  if (raw === null) {
    return null;
  }
  try {
    return JSON.parse(raw) as T;
  } catch {
    store.removeItem(key);
    return null;
  }
}

export function clearDraft(store: DraftStore, key: string): void {
  store.removeItem(key);
}
