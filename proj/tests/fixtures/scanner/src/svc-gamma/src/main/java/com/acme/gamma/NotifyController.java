package com.acme.gamma;

import org.springframework.stereotype.Controller;
import org.springframework.web.bind.annotation.*;

@Controller
@RequestMapping("/api/v1/notify/")
public class NotifyController {

    @PostMapping("/send")
    @ResponseBody
    public Receipt send(@RequestBody Message message) {
        return mailer.send(message);
    }

    @GetMapping(value = "/templates/{name}", produces = "application/json")
    @ResponseBody
    public Template template(@PathVariable(name = "name") final String templateName) {
        return templates.load(templateName);
    }
}
