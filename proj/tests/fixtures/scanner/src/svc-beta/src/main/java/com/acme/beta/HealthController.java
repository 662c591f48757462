package com.acme.beta;

import org.springframework.web.bind.annotation.RestController;

@RestController
public class HealthController {
    public String ping() {
        return "pong";
    }
}
