import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    globalSetup: "./tests/global-setup.ts",
    fileParallelism: false,
    testTimeout: 60000,
    hookTimeout: 120000,
  },
});
