import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    environmentOptions: {
      // e2e tests talk to a live service on a random localhost port
      happyDOM: { settings: { fetch: { disableSameOriginPolicy: true } } },
    },
    include: ["tests/**/*.test.ts"],
    // e2e files boot a real server; generous ceilings keep slow CI green
    testTimeout: 120_000,
    hookTimeout: 60_000,
    pool: "forks",
  },
});
