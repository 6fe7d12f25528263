// Workbench bootstrap: audit and rater come from the query string,
// the API base defaults to the serving origin.

import { ApiClient } from "./api.js";
import { RaterSession } from "./session.js";
import { Workbench } from "./ui.js";

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  const base = param("api", window.location.origin);
  const auditId = param("audit", "openclaw");
  const raterId = param("rater", "r1");
  const client = new ApiClient(base);
  const session = new RaterSession(client, auditId, raterId);
  const workbench = new Workbench(root, client, session);
  try {
    await workbench.start();
    workbench.setStatus(`scoring as ${raterId}; values stay blind until both raters submit a slot`);
  } catch (error) {
    workbench.setStatus(String(error), true);
  }
}

void boot();
