import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    // the parity suite boots the real service; give it room
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
