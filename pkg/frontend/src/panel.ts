/** Details panel for the highlighted track. */

import type { ViewState } from "./state.js";
import type { TrackFeature } from "./types.js";

function selectedFeature(state: ViewState): TrackFeature | null {
  if (state.selection === null) return null;
  return (
    state.collection?.features.find((f) => f.properties.mmsi === state.selection) ?? null
  );
}

export function renderPanel(el: HTMLElement, state: ViewState): void {
  const doc = el.ownerDocument;
  el.textContent = "";
  const feature = selectedFeature(state);
  if (!feature) {
    const hint = doc.createElement("p");
    hint.className = "hint";
    hint.textContent = "Click a track for details.";
    el.appendChild(hint);
    return;
  }
  const props = feature.properties;
  const title = doc.createElement("h3");
  title.textContent = props.ship_name || `MMSI ${props.mmsi}`;
  el.appendChild(title);

  const rows: Array<[string, string]> = [
    ["mmsi", String(props.mmsi)],
    ["type", props.ship_type],
    ["class", props.vtype],
    ["points", String(feature.geometry.coordinates.length)],
    ["first", props.timestamps[0] ?? ""],
    ["last", props.timestamps[props.timestamps.length - 1] ?? ""],
  ];
  const dl = doc.createElement("dl");
  for (const [key, value] of rows) {
    const dt = doc.createElement("dt");
    dt.textContent = key;
    const dd = doc.createElement("dd");
    dd.textContent = value;
    dd.dataset.field = key;
    dl.appendChild(dt);
    dl.appendChild(dd);
  }
  el.appendChild(dl);
}
