import { defineConfig } from "vitest/config";

// The e2e suite spawns the studio service on this port; the test window
// shares its origin so fetches are same-origin.
const SERVICE = "http://127.0.0.1:8991";

export default defineConfig({
    test: {
        environment: "happy-dom",
        environmentOptions: {
            happyDOM: { url: SERVICE },
        },
        include: ["tests/**/*.test.ts"],
        testTimeout: 120_000,
        hookTimeout: 120_000,
    },
});
