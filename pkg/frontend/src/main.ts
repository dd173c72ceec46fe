import { SuggestClient } from "./client.js";
import { Dashboard } from "./dashboard.js";
import { Typeahead } from "./typeahead.js";

function requireEl<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id} in the page`);
  return el as T;
}

document.addEventListener("DOMContentLoaded", () => {
  const params = new URLSearchParams(window.location.search);
  // served by the suggest service itself by default; ?api= points elsewhere
  const baseUrl = params.get("api") ?? window.location.origin;
  const pollMs = Number(params.get("poll") ?? "5000");
  const user = params.get("user") ?? undefined;

  const client = new SuggestClient(baseUrl);
  const dashboard = new Dashboard(requireEl("dashboard"), client, {
    pollMs: Number.isFinite(pollMs) ? pollMs : 5000,
  });
  new Typeahead(
    requireEl<HTMLInputElement>("query"),
    requireEl("suggestions"),
    requireEl("banner"),
    client,
    {
      user,
      onEpisode: (ep) => {
        dashboard.logEpisode(ep);
        void dashboard.refresh();
      },
    },
  );

  requireEl("refresh").addEventListener("click", () => void dashboard.refresh());
  dashboard.start();
  console.log(`suggest client connected to ${baseUrl}`);
});
