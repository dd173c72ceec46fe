import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    include: ["tests/**/*.test.ts"],
    // the end-to-end test boots a real service process
    testTimeout: 30000,
    hookTimeout: 60000,
  },
});
