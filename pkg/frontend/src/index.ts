export * from "./types.js";
export * from "./overlays.js";
export * from "./animation.js";
export * from "./client.js";
export * from "./studio.js";
